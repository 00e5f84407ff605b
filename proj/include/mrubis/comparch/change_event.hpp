#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrubis/comparch/uid.hpp"

namespace mrubis::comparch {

enum class ChangeEventKind {
    ComponentLifecycleChanged,
    ComponentAdded,
    ComponentRemoved,
    ConnectorAdded,
    ConnectorRemoved,
    ConnectorRerouted,
    ExceptionOccurred,
    ParameterValueChanged,
    PerformanceStatsUpdated,
    MonitoredPropertyAdded,
    MonitoredPropertyUpdated,
};

inline constexpr std::size_t kChangeEventKindCount = 11;

std::string_view toString(ChangeEventKind kind);
std::optional<ChangeEventKind> parseChangeEventKind(std::string_view text);

using EventPayload = std::vector<std::pair<std::string, std::string>>;

/// Notification of one model mutation.
///
/// `timestamp` is a logical clock: strictly increasing per emission, so runs
/// replay byte-identically. `round`/`step` record the simulation context that
/// was active when the event was emitted (0/0 outside of a simulation).
struct ChangeEvent {
    ChangeEventKind kind{};
    std::uint64_t timestamp = 0;
    Uid subject;
    EventPayload payload;
    int round = 0;
    int step = 0;

    [[nodiscard]] std::optional<std::string_view> get(std::string_view key) const;
    /// Payload value parsed as a uid; empty when absent or malformed.
    [[nodiscard]] std::optional<Uid> getUid(std::string_view key) const;
};

/// Single-producer, single-consumer buffer of change events with consume-on-drain semantics.
class ChangeEventQueue {
public:
    void emit(ChangeEventKind kind, Uid subject, EventPayload payload);

    /// Every event emitted since the previous drain, in emission order.
    [[nodiscard]] std::vector<ChangeEvent> drain();

    [[nodiscard]] std::size_t pending() const { return pending_.size(); }
    [[nodiscard]] std::uint64_t emittedCount() const { return clock_; }
    [[nodiscard]] std::uint64_t clock() const { return clock_; }

    void setOrigin(int round, int step) {
        round_ = round;
        step_ = step;
    }

    /// Restores the logical clock of a parsed snapshot.
    void resetClock(std::uint64_t clock) { clock_ = clock; }

private:
    std::vector<ChangeEvent> pending_;
    std::uint64_t clock_ = 0;
    int round_ = 0;
    int step_ = 0;
};

/// One line of the per-round event log: round,step,timestamp,kind,subjectUid,payload
std::string formatEventLine(const ChangeEvent& event);

}  // namespace mrubis::comparch
