#include "mrubis/comparch/change_event.hpp"

#include <array>
#include <charconv>

#include <fmt/format.h>

namespace mrubis::comparch {

namespace {

constexpr std::array<std::string_view, kChangeEventKindCount> kKindNames{
    "ComponentLifecycleChanged", "ComponentAdded",         "ComponentRemoved",
    "ConnectorAdded",            "ConnectorRemoved",       "ConnectorRerouted",
    "ExceptionOccurred",         "ParameterValueChanged",  "PerformanceStatsUpdated",
    "MonitoredPropertyAdded",    "MonitoredPropertyUpdated",
};

// Payload values end up in a comma separated log; keep separators out of them.
std::string escapeLogValue(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
            case ',': out += "%2C"; break;
            case ';': out += "%3B"; break;
            case '=': out += "%3D"; break;
            case '\n': out += "%0A"; break;
            case '%': out += "%25"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string_view toString(ChangeEventKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ChangeEventKind> parseChangeEventKind(std::string_view text) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<ChangeEventKind>(i);
    }
    return std::nullopt;
}

std::optional<std::string_view> ChangeEvent::get(std::string_view key) const {
    for (const auto& [k, v] : payload) {
        if (k == key) return std::string_view{v};
    }
    return std::nullopt;
}

std::optional<Uid> ChangeEvent::getUid(std::string_view key) const {
    auto text = get(key);
    if (!text) return std::nullopt;
    std::uint64_t value{};
    auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
    if (ec != std::errc{} || ptr != text->data() + text->size() || value == 0) return std::nullopt;
    return Uid{value};
}

void ChangeEventQueue::emit(ChangeEventKind kind, Uid subject, EventPayload payload) {
    pending_.push_back(ChangeEvent{kind, ++clock_, subject, std::move(payload), round_, step_});
}

std::vector<ChangeEvent> ChangeEventQueue::drain() {
    std::vector<ChangeEvent> out;
    out.swap(pending_);
    return out;
}

std::string formatEventLine(const ChangeEvent& event) {
    std::string payload;
    for (const auto& [key, value] : event.payload) {
        if (!payload.empty()) payload += ';';
        payload += key;
        payload += '=';
        payload += escapeLogValue(value);
    }
    return fmt::format("{},{},{},{},{},{}", event.round, event.step, event.timestamp,
                       toString(event.kind), event.subject.value, payload);
}

}  // namespace mrubis::comparch
