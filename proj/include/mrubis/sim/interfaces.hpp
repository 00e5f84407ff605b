#pragma once

#include <random>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "mrubis/comparch/architecture.hpp"
#include "mrubis/comparch/change_event.hpp"
#include "mrubis/comparch/model_handle.hpp"
#include "mrubis/sim/issue.hpp"

namespace mrubis::sim {

using comparch::Architecture;
using comparch::ChangeEvent;
using comparch::ModelHandle;

/// All simulation randomness flows through one generator seeded from the config.
using Rng = std::mt19937_64;

/// Decides which issues hit which elements in a round.
class Scenario {
public:
    virtual ~Scenario() = default;
    [[nodiscard]] virtual std::string_view name() const = 0;
    [[nodiscard]] virtual std::vector<IssueKind> producibleIssues() const = 0;
    virtual std::vector<Injection> nextInjections(int round, const Architecture& model, Rng& rng) = 0;
};

/// Applies one issue kind to a target element through a SIMULATOR handle.
/// Choices below the target (which interface, which filter) draw from `rng`.
class Injector {
public:
    virtual ~Injector() = default;
    virtual void inject(ModelHandle& simulator, Uid target, Rng& rng) = 0;
};

/// Checks for remaining issues after adaptation and may update runtime-level
/// state to reflect the adapted architecture.
class Validator {
public:
    virtual ~Validator() = default;
    [[nodiscard]] virtual std::string_view name() const = 0;
    virtual std::vector<Violation> validate(ModelHandle& simulator) = 0;
};

class UtilityFunction {
public:
    virtual ~UtilityFunction() = default;
    [[nodiscard]] virtual double utility(const Architecture& model) const = 0;
};

struct AppliedStrategy {
    std::string strategy;  // "AS1" .. "AS8"
    Uid target;
    std::string detail;
};

struct EngineOutcome {
    std::vector<AppliedStrategy> strategiesApplied;
    std::vector<std::string> notes;
};

/// User-supplied feedback loop. Runs between injection and validation with
/// an ENGINE handle and the change events delivered since its last run.
/// Long-running engines should poll `stop` and return early once requested.
class AdaptationEngine {
public:
    virtual ~AdaptationEngine() = default;
    [[nodiscard]] virtual std::string_view name() const = 0;
    virtual EngineOutcome adapt(ModelHandle& engine, std::span<const ChangeEvent> events, std::stop_token stop) = 0;
};

/// Engine that never adapts anything.
class NoopEngine final : public AdaptationEngine {
public:
    [[nodiscard]] std::string_view name() const override { return "noop"; }
    EngineOutcome adapt(ModelHandle&, std::span<const ChangeEvent>, std::stop_token) override { return {}; }
};

}  // namespace mrubis::sim
