#include "mrubis/sim/issue.hpp"

#include <array>

namespace mrubis::sim {

namespace {

constexpr std::array<std::string_view, 8> kNames{"CF1", "CF2", "CF3", "CF4", "CF5", "PI1", "PI2", "PI3"};

constexpr std::array<std::string_view, 8> kDescriptions{
    "component crashed and entered the UNKNOWN state",
    "component throws exceptions beyond the threshold",
    "component destroyed and removed from the architecture",
    "component repeatedly affected by CF1/CF2",
    "connector lost and removed from the architecture",
    "pipe of filters not optimally ordered",
    "search response time above the upper threshold",
    "search response time below the lower threshold",
};

}  // namespace

std::string_view toString(IssueKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<IssueKind> parseIssueKind(std::string_view text) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == text) return static_cast<IssueKind>(i);
    }
    return std::nullopt;
}

std::string_view describe(IssueKind kind) { return kDescriptions[static_cast<std::size_t>(kind)]; }

}  // namespace mrubis::sim
