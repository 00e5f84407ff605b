#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mrubis/comparch/change_event.hpp"
#include "mrubis/comparch/elements.hpp"
#include "mrubis/comparch/uid.hpp"

namespace mrubis::comparch {

struct ParameterTypeSpec {
    std::string name;
    DataType dataType = DataType::String;
    std::string defaultValue;
};

struct ComponentTypeSpec {
    std::string name;
    double reliability = 1.0;
    double criticality = 0.0;
    std::vector<ParameterTypeSpec> parameters;
    std::vector<Uid> requiredInterfaceTypes;
    std::vector<Uid> providedInterfaceTypes;
};

class ModelHandle;
class Architecture;
Architecture parseSnapshot(std::string_view text);

/// Root of a CompArch model.
///
/// The type level and the tenant list are built through the public
/// construction API and frozen by seal() (implicitly on the first
/// instantiation). Afterwards all mutations go through a ModelHandle, which
/// enforces the role permissions and emits change events.
///
/// Element reads used by adaptation engines are counted (see reads()) so
/// that scan-based and event-driven engines can be compared.
class Architecture {
public:
    explicit Architecture(std::string name);

    // -- construction ---------------------------------------------------------
    Uid addInterfaceType(std::string fqName, const std::vector<std::string>& methodSignatures,
                         double criticality = 0.0);
    Uid addComponentType(const ComponentTypeSpec& spec);
    Uid addTenant(std::string name, double criticality = 0.0);
    void seal() { sealed_ = true; }
    [[nodiscard]] bool sealed() const { return sealed_; }

    // -- type level -----------------------------------------------------------
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::vector<InterfaceType>& interfaceTypes() const { return interfaceTypes_; }
    [[nodiscard]] const std::vector<ComponentType>& componentTypes() const { return componentTypes_; }
    [[nodiscard]] const InterfaceType* interfaceType(Uid uid) const;
    [[nodiscard]] const InterfaceType* interfaceTypeByName(std::string_view fqName) const;
    [[nodiscard]] const ComponentType* componentType(Uid uid) const;
    [[nodiscard]] const ComponentType* componentTypeByName(std::string_view name) const;
    [[nodiscard]] const ParameterType* parameterType(Uid uid) const;

    // -- deployment level -----------------------------------------------------
    [[nodiscard]] const std::vector<Tenant>& tenants() const { return tenants_; }
    [[nodiscard]] const Tenant* tenant(Uid uid) const;
    [[nodiscard]] const Tenant* tenantByName(std::string_view name) const;
    [[nodiscard]] const Component* component(Uid uid) const;
    /// Components of one tenant in instantiation order.
    [[nodiscard]] std::vector<const Component*> componentsOf(Uid tenant) const;
    /// All components, tenant by tenant.
    [[nodiscard]] std::vector<const Component*> components() const;
    [[nodiscard]] std::vector<const Component*> componentsOfType(Uid type) const;
    [[nodiscard]] std::size_t componentCount() const { return components_.size(); }
    [[nodiscard]] const Connector* connector(Uid uid) const;
    /// All connectors ordered by (tenant, source component position, required interface).
    [[nodiscard]] std::vector<const Connector*> connectors() const;
    [[nodiscard]] std::size_t connectorCount() const { return connectors_.size(); }
    [[nodiscard]] const RequiredInterface* requiredInterface(Uid uid) const;
    [[nodiscard]] const ProvidedInterface* providedInterface(Uid uid) const;
    [[nodiscard]] const Parameter* parameter(Uid uid) const;

    // -- queries ----------------------------------------------------------------
    [[nodiscard]] std::optional<ElementKind> findByUid(Uid uid) const;
    [[nodiscard]] std::size_t connectivity(Uid component) const;
    [[nodiscard]] std::optional<Uid> tenantOf(Uid component) const;
    [[nodiscard]] std::optional<Uid> connectedProvider(Uid requiredInterface) const;
    /// Component owning a required or provided interface.
    [[nodiscard]] std::optional<Uid> interfaceOwner(Uid interfaceUid) const;
    /// Exceptions raised during the component's current deployment.
    [[nodiscard]] std::size_t exceptionCount(Uid component) const;

    // -- runtime level ----------------------------------------------------------
    [[nodiscard]] const MonitoredProperty* property(Uid owner, std::string_view name) const;
    [[nodiscard]] std::vector<const MonitoredProperty*> properties() const;

    // -- annotations ------------------------------------------------------------
    [[nodiscard]] const std::map<Uid, Annotation>& annotations() const { return annotations_; }
    [[nodiscard]] const Annotation* annotation(Uid uid) const;

    // -- bookkeeping ------------------------------------------------------------
    [[nodiscard]] ChangeEventQueue& events() { return events_; }
    [[nodiscard]] const ChangeEventQueue& events() const { return events_; }
    [[nodiscard]] std::uint64_t reads() const { return reads_; }
    void resetReads() const { reads_ = 0; }
    [[nodiscard]] std::uint64_t nextUid() const { return nextUid_; }
    [[nodiscard]] std::uint64_t nextAnnotationUid() const { return nextAnnotationUid_; }
    [[nodiscard]] std::size_t registeredElements() const { return registry_.size(); }

private:
    friend class ModelHandle;
    friend Architecture parseSnapshot(std::string_view text);

    struct InterfaceSlot {
        Uid component;
        bool provided = false;
        std::size_t index = 0;
    };
    struct ParameterSlot {
        Uid component;
        std::size_t index = 0;
    };

    Uid allocate(ElementKind kind);
    void registerUid(Uid uid, ElementKind kind);
    void unregister(Uid uid) { registry_.erase(uid); }
    Component& mutableComponent(Uid uid);
    RequiredInterface& mutableRequired(Uid uid);
    ProvidedInterface& mutableProvided(Uid uid);
    Tenant& mutableTenant(Uid uid);

    // Unchecked mutators; ModelHandle validates roles and preconditions first.
    Uid doInstantiate(Uid type, Uid tenant);
    void doSetState(Uid component, ComponentState state);
    void doRemoveComponent(Uid component);
    Uid doConnect(Uid required, Uid provided);
    void doDisconnect(Uid connector);
    void doReroute(Uid connector, Uid provided);
    void doSetParameter(Uid parameter, std::string value);
    Uid doRecordException(Uid provided, Uid method, std::string type, std::string message,
                          std::string stackTrace);
    Uid doUpdateStats(Uid provided, Uid method, const StatsValues& values);
    Uid doSetProperty(Uid owner, std::string name, std::string description, DataType dataType,
                      std::string unit, std::string value);
    Uid doAnnotate(Annotation annotation);
    void doRemoveAnnotation(Uid uid);

    std::string name_;
    bool sealed_ = false;
    std::uint64_t nextUid_ = 1;
    std::uint64_t nextAnnotationUid_ = kAnnotationUidBase;

    std::vector<InterfaceType> interfaceTypes_;
    std::vector<ComponentType> componentTypes_;
    std::vector<Tenant> tenants_;
    std::map<Uid, Component> components_;
    std::map<Uid, Connector> connectors_;
    std::map<std::pair<Uid, std::string>, MonitoredProperty> properties_;
    std::map<Uid, Annotation> annotations_;

    std::unordered_map<Uid, ElementKind> registry_;
    std::unordered_map<Uid, InterfaceSlot> interfaces_;
    std::unordered_map<Uid, ParameterSlot> parameters_;

    ChangeEventQueue events_;
    mutable std::uint64_t reads_ = 0;
};

}  // namespace mrubis::comparch
