#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrubis/sim/interfaces.hpp"

namespace mrubis::sim {

/// The six steps of a simulation round, in execution order.
enum class Step {
    Inject = 1,
    UtilityAfterInjection = 2,
    Adapt = 3,
    MeasureTime = 4,
    Validate = 5,
    UtilityAfterAdaptation = 6,
};

/// Instrumentation hook; called after each step completes.
class SimulationObserver {
public:
    virtual ~SimulationObserver() = default;
    virtual void afterStep(int round, Step step, const Architecture& model) = 0;
};

struct SimulatorConfig {
    int rounds = 0;
    std::uint64_t seed = 0;
    std::shared_ptr<Scenario> scenario;
    std::map<IssueKind, std::shared_ptr<Injector>> injectors;
    std::vector<std::shared_ptr<Validator>> validators;
    std::shared_ptr<UtilityFunction> utility;
    std::set<int> snapshotRounds;  // 0 snapshots the initial model
    std::filesystem::path outputDir;  // empty: report is not written
    std::chrono::milliseconds engineTimeout{60'000};
    /// Runs the engine on a worker thread so the timeout can be enforced.
    bool isolateEngine = true;
    SimulationObserver* observer = nullptr;
};

struct RoundRecord {
    int round = 0;
    std::vector<Injection> injections;
    double utilityBeforeInjection = 0.0;
    double utilityAfterInjection = 0.0;
    double executionTimeMs = 0.0;
    std::vector<Violation> violations;
    double utilityAfterAdaptation = 0.0;
    bool failed = false;
    std::string failure;
    std::uint64_t modelReads = 0;
    std::size_t eventsDelivered = 0;
    std::vector<AppliedStrategy> strategies;
    std::vector<std::string> notes;
};

struct SimulationSummary {
    double initialUtility = 0.0;
    double finalUtility = 0.0;
    double meanExecutionTimeMs = 0.0;
    double maxExecutionTimeMs = 0.0;
    int roundsFullyHealed = 0;
    int failedRounds = 0;
    std::uint64_t totalModelReads = 0;
};

struct SimulationReport {
    std::string engine;
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<RoundRecord> rounds;
    SimulationSummary summary;
    /// Every change event of the run in emission order (drained exactly once).
    std::vector<ChangeEvent> events;
    /// (round, serialized model) for each configured snapshot round.
    std::vector<std::pair<int, std::string>> snapshots;
};

/// Injector, validator, scenario or configuration fault; the run cannot continue.
class SimulationAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Computes the utility of the current model (pure read).
double computeUtility(const Architecture& model, const UtilityFunction& function);

/// Executes `config.rounds` rounds of inject / utility / adapt / measure /
/// validate / utility against `model`. Engine faults and timeouts mark the
/// round as failed and the run continues; any other fault throws
/// SimulationAborted. When `config.outputDir` is set the report is written
/// there as well.
SimulationReport runSimulation(const SimulatorConfig& config, Architecture& model, AdaptationEngine& engine);

}  // namespace mrubis::sim
