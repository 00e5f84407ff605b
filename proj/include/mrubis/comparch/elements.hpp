#pragma once

// Element records of the CompArch metamodel. Records are plain values owned
// by an Architecture and cross-reference each other by Uid only.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrubis/comparch/uid.hpp"

namespace mrubis::comparch {

enum class DataType { Bool, Int, Real, String };

std::string_view toString(DataType type);
std::optional<DataType> parseDataType(std::string_view text);

/// True when `value` is a valid string encoding of `type`.
bool valueParses(DataType type, std::string_view value);

enum class ComponentState { Undeployed, Deployed, Started, Unknown };

std::string_view toString(ComponentState state);
std::optional<ComponentState> parseComponentState(std::string_view text);

enum class ElementKind {
    InterfaceType,
    MethodSpecification,
    ComponentType,
    ParameterType,
    Tenant,
    Component,
    Parameter,
    RequiredInterface,
    ProvidedInterface,
    Connector,
    Exception,
    PerformanceStats,
    MonitoredProperty,
    Annotation,
};

std::string_view toString(ElementKind kind);

// ---- type level -----------------------------------------------------------

struct MethodSpecification {
    Uid uid;
    std::string signature;
};

struct InterfaceType {
    Uid uid;
    double criticality = 0.0;
    std::string fqName;
    std::vector<MethodSpecification> methods;
};

struct ParameterType {
    Uid uid;
    std::string name;
    DataType dataType = DataType::String;
    std::string defaultValue;
};

struct ComponentType {
    Uid uid;
    double criticality = 0.0;
    std::string name;
    double reliability = 1.0;
    std::vector<ParameterType> parameterTypes;
    std::vector<Uid> requiredInterfaceTypes;
    std::vector<Uid> providedInterfaceTypes;
};

// ---- runtime level --------------------------------------------------------

struct ExceptionRecord {
    Uid uid;
    Uid method;
    std::string type;
    std::string message;
    std::string stackTrace;
    /// Deployment generation of the owning component when the exception was raised.
    std::uint32_t deployment = 0;
};

/// Counter values of a PerformanceStats record, without identity.
struct StatsValues {
    double minTime = 0.0;
    double maxTime = 0.0;
    double totalTime = 0.0;
    std::uint64_t invocationCount = 0;

    /// totalTime / invocationCount; empty when nothing was invoked.
    [[nodiscard]] std::optional<double> average() const {
        if (invocationCount == 0) return std::nullopt;
        return totalTime / static_cast<double>(invocationCount);
    }

    friend bool operator==(const StatsValues&, const StatsValues&) = default;
};

struct PerformanceStats {
    Uid uid;
    Uid method;
    StatsValues values;
};

struct MonitoredProperty {
    Uid uid;
    Uid owner;
    std::string name;
    std::string description;
    DataType dataType = DataType::String;
    std::string unit;
    std::string value;
};

// ---- deployment level -----------------------------------------------------

struct Parameter {
    Uid uid;
    Uid type;  // ParameterType
    std::string value;
};

struct RequiredInterface {
    Uid uid;
    Uid type;  // InterfaceType
    Uid component;
    std::optional<Uid> connector;
};

struct ProvidedInterface {
    Uid uid;
    Uid type;  // InterfaceType
    Uid component;
    std::vector<Uid> connectors;  // incoming, ascending uid
    std::vector<ExceptionRecord> exceptions;
    std::vector<PerformanceStats> stats;
};

struct Component {
    Uid uid;
    double criticality = 0.0;
    Uid type;
    Uid tenant;
    ComponentState state = ComponentState::Undeployed;
    /// Incremented on every UNDEPLOYED -> DEPLOYED transition.
    std::uint32_t deployment = 0;
    std::vector<Parameter> parameters;
    std::vector<RequiredInterface> required;
    std::vector<ProvidedInterface> provided;

    /// Connector attachments over all interfaces. A connector wiring two
    /// interfaces of the same component is attached twice.
    [[nodiscard]] std::size_t connectivity() const;
};

struct Connector {
    Uid uid;
    double criticality = 0.0;
    Uid source;  // RequiredInterface
    Uid target;  // ProvidedInterface
};

struct Tenant {
    Uid uid;
    double criticality = 0.0;
    std::string name;
    std::vector<Uid> components;  // instantiation order
};

// ---- annotations ----------------------------------------------------------

struct WorkingData {
    std::string value;
    std::string unit;
    std::vector<Uid> concernedElements;
};

struct Issue {
    double utilityDrop = 0.0;
    std::vector<Uid> impacts;
};

struct AdaptationStrategy {
    double utilityIncrease = 0.0;
    double costs = 0.0;
    Uid assignedIssue;
    std::vector<Uid> inputParameters;
};

struct Annotation {
    Uid uid;
    std::string name;
    std::string type;
    std::string description;
    std::variant<WorkingData, Issue, AdaptationStrategy> body;
};

}  // namespace mrubis::comparch
