#include "mrubis/comparch/elements.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>

namespace mrubis::comparch {

namespace {

constexpr std::array<std::string_view, 4> kDataTypeNames{"bool", "int", "real", "string"};
constexpr std::array<std::string_view, 4> kStateNames{"UNDEPLOYED", "DEPLOYED", "STARTED", "UNKNOWN"};

}  // namespace

std::string_view toString(DataType type) { return kDataTypeNames[static_cast<std::size_t>(type)]; }

std::optional<DataType> parseDataType(std::string_view text) {
    for (std::size_t i = 0; i < kDataTypeNames.size(); ++i) {
        if (kDataTypeNames[i] == text) return static_cast<DataType>(i);
    }
    return std::nullopt;
}

bool valueParses(DataType type, std::string_view value) {
    const char* first = value.data();
    const char* last = value.data() + value.size();
    switch (type) {
        case DataType::Bool:
            return value == "true" || value == "false";
        case DataType::Int: {
            std::int64_t parsed{};
            auto [ptr, ec] = std::from_chars(first, last, parsed);
            return !value.empty() && ec == std::errc{} && ptr == last;
        }
        case DataType::Real: {
            double parsed{};
            auto [ptr, ec] = std::from_chars(first, last, parsed);
            return !value.empty() && ec == std::errc{} && ptr == last && std::isfinite(parsed);
        }
        case DataType::String:
            return true;
    }
    return false;
}

std::string_view toString(ComponentState state) { return kStateNames[static_cast<std::size_t>(state)]; }

std::optional<ComponentState> parseComponentState(std::string_view text) {
    for (std::size_t i = 0; i < kStateNames.size(); ++i) {
        if (kStateNames[i] == text) return static_cast<ComponentState>(i);
    }
    return std::nullopt;
}

std::string_view toString(ElementKind kind) {
    switch (kind) {
        case ElementKind::InterfaceType: return "InterfaceType";
        case ElementKind::MethodSpecification: return "MethodSpecification";
        case ElementKind::ComponentType: return "ComponentType";
        case ElementKind::ParameterType: return "ParameterType";
        case ElementKind::Tenant: return "Tenant";
        case ElementKind::Component: return "Component";
        case ElementKind::Parameter: return "Parameter";
        case ElementKind::RequiredInterface: return "RequiredInterface";
        case ElementKind::ProvidedInterface: return "ProvidedInterface";
        case ElementKind::Connector: return "Connector";
        case ElementKind::Exception: return "Exception";
        case ElementKind::PerformanceStats: return "PerformanceStats";
        case ElementKind::MonitoredProperty: return "MonitoredProperty";
        case ElementKind::Annotation: return "Annotation";
    }
    return "?";
}

std::size_t Component::connectivity() const {
    std::size_t count = 0;
    for (const auto& req : required) {
        if (req.connector) ++count;
    }
    for (const auto& prov : provided) count += prov.connectors.size();
    return count;
}

}  // namespace mrubis::comparch
