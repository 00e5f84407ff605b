#pragma once

#include <string>
#include <string_view>

#include "mrubis/comparch/architecture.hpp"

namespace mrubis::comparch {

enum class Role { Simulator, Engine };

std::string_view toString(Role role);

/// Role-typed access to a model. Every mutation of a sealed Architecture goes
/// through a handle.
///
/// Permissions:
///   - both roles: instantiate, lifecycle changes, remove, connect, reroute,
///     parameter values, annotations;
///   - SIMULATOR only: runtime observations and entering UNKNOWN.
///
/// Lifecycle transitions accepted for ENGINE are UNDEPLOYED<->DEPLOYED,
/// DEPLOYED<->STARTED and UNKNOWN->DEPLOYED. SIMULATOR may additionally move
/// any component into UNKNOWN. Rejected calls throw and leave the model
/// unchanged.
class ModelHandle {
public:
    ModelHandle(Role role, Architecture& model) : role_(role), model_(&model) {}

    [[nodiscard]] Role role() const { return role_; }
    [[nodiscard]] const Architecture& model() const { return *model_; }

    Uid instantiate(Uid componentType, Uid tenant);
    void setState(Uid component, ComponentState state);
    /// Removes the component and cascades to every attached connector.
    /// Emits one ConnectorRemoved per connector (required interfaces first,
    /// then provided interfaces, each in interface order) followed by one
    /// ComponentRemoved.
    void removeComponent(Uid component);
    Uid connect(Uid requiredInterface, Uid providedInterface);
    void disconnect(Uid connector);
    void reroute(Uid connector, Uid providedInterface);
    void setParameter(Uid parameter, std::string value);

    Uid recordException(Uid providedInterface, Uid method, std::string type, std::string message,
                        std::string stackTrace);
    Uid updatePerformanceStats(Uid providedInterface, Uid method, const StatsValues& values);
    Uid setMonitoredProperty(Uid owner, std::string name, std::string description, DataType dataType,
                             std::string unit, std::string value);

    Uid annotate(Annotation annotation);
    void removeAnnotation(Uid annotation);
    void clearAnnotations();

private:
    void requireSimulator(std::string_view operation) const;

    Role role_;
    Architecture* model_;
};

/// Whether `role` may move a component from `from` to `to`.
bool transitionAllowed(Role role, ComponentState from, ComponentState to);

}  // namespace mrubis::comparch
