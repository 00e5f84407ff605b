#include "mrubis/sim/simulator.hpp"

#include <algorithm>
#include <exception>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "mrubis/comparch/snapshot.hpp"
#include "mrubis/sim/report.hpp"

namespace mrubis::sim {

namespace {

using comparch::Role;
using Clock = std::chrono::steady_clock;

struct EngineRun {
    EngineOutcome outcome;
    double elapsedMs = 0.0;
    std::exception_ptr error;
    bool timedOut = false;
};

void invokeEngine(AdaptationEngine& engine, ModelHandle& handle, std::span<const ChangeEvent> events,
                  std::stop_token stop, EngineRun& run) {
    const auto start = Clock::now();
    try {
        run.outcome = engine.adapt(handle, events, stop);
    } catch (...) {
        run.error = std::current_exception();
    }
    run.elapsedMs = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

EngineRun runEngine(const SimulatorConfig& config, AdaptationEngine& engine, ModelHandle& handle,
                    std::span<const ChangeEvent> events) {
    EngineRun run;
    if (!config.isolateEngine) {
        invokeEngine(engine, handle, events, std::stop_token{}, run);
        return run;
    }
    // The worker owns the model until it is joined; the kernel only waits.
    std::promise<void> finished;
    auto done = finished.get_future();
    std::jthread worker([&](std::stop_token stop) {
        invokeEngine(engine, handle, events, stop, run);
        finished.set_value();
    });
    if (done.wait_for(config.engineTimeout) == std::future_status::timeout) {
        run.timedOut = true;
        worker.request_stop();
    }
    worker.join();
    return run;
}

std::string describeError(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown exception";
    }
}

void validateConfig(const SimulatorConfig& config) {
    if (config.rounds < 0) throw SimulationAborted("rounds must be non-negative");
    if (!config.scenario) throw SimulationAborted("no scenario configured");
    if (!config.utility) throw SimulationAborted("no utility function configured");
    for (IssueKind kind : config.scenario->producibleIssues()) {
        auto it = config.injectors.find(kind);
        if (it == config.injectors.end() || !it->second) {
            throw SimulationAborted(
                fmt::format("scenario '{}' can produce {} but no injector is registered", config.scenario->name(),
                            toString(kind)));
        }
    }
    for (const auto& v : config.validators) {
        if (!v) throw SimulationAborted("null validator configured");
    }
}

}  // namespace

double computeUtility(const Architecture& model, const UtilityFunction& function) { return function.utility(model); }

SimulationReport runSimulation(const SimulatorConfig& config, Architecture& model, AdaptationEngine& engine) {
    validateConfig(config);

    SimulationReport report;
    report.engine = std::string(engine.name());
    report.scenario = std::string(config.scenario->name());
    report.seed = config.seed;

    Rng rng(config.seed);
    ModelHandle simulator(Role::Simulator, model);
    ModelHandle engineHandle(Role::Engine, model);
    auto& queue = model.events();

    auto notify = [&](int round, Step step) {
        if (config.observer) config.observer->afterStep(round, step, model);
    };
    auto snapshot = [&](int round) {
        if (config.snapshotRounds.count(round)) {
            report.snapshots.emplace_back(round, comparch::serializeSnapshot(model));
        }
    };
    auto step = [&](int round, Step s) { queue.setOrigin(round, static_cast<int>(s)); };

    report.summary.initialUtility = computeUtility(model, *config.utility);
    snapshot(0);
    double previous = report.summary.initialUtility;

    for (int round = 1; round <= config.rounds; ++round) {
        RoundRecord record;
        record.round = round;
        record.utilityBeforeInjection = previous;

        // (1) inject issues
        step(round, Step::Inject);
        try {
            record.injections = config.scenario->nextInjections(round, model, rng);
            for (const auto& injection : record.injections) {
                auto it = config.injectors.find(injection.kind);
                if (it == config.injectors.end()) {
                    throw SimulationAborted(fmt::format("no injector for {}", toString(injection.kind)));
                }
                it->second->inject(simulator, injection.target, rng);
            }
        } catch (const SimulationAborted&) {
            throw;
        } catch (const std::exception& e) {
            throw SimulationAborted(fmt::format("round {}: injection failed: {}", round, e.what()));
        }
        notify(round, Step::Inject);

        // (2) utility after injection
        step(round, Step::UtilityAfterInjection);
        record.utilityAfterInjection = computeUtility(model, *config.utility);
        notify(round, Step::UtilityAfterInjection);

        // (3) run the engine on the events accumulated since its last run
        step(round, Step::Adapt);
        std::vector<ChangeEvent> delivered = queue.drain();
        record.eventsDelivered = delivered.size();
        report.events.insert(report.events.end(), delivered.begin(), delivered.end());
        model.resetReads();
        EngineRun run = runEngine(config, engine, engineHandle, delivered);
        record.modelReads = model.reads();
        notify(round, Step::Adapt);

        // (4) execution time of step 3 only
        step(round, Step::MeasureTime);
        record.executionTimeMs = run.elapsedMs;
        record.strategies = std::move(run.outcome.strategiesApplied);
        record.notes = std::move(run.outcome.notes);
        if (run.timedOut) {
            record.failed = true;
            record.failure = fmt::format("engine exceeded the {} ms budget", config.engineTimeout.count());
        } else if (run.error) {
            record.failed = true;
            record.failure = describeError(run.error);
        }
        notify(round, Step::MeasureTime);

        // (5) validate and update the model
        step(round, Step::Validate);
        for (const auto& validator : config.validators) {
            try {
                auto found = validator->validate(simulator);
                record.violations.insert(record.violations.end(), found.begin(), found.end());
            } catch (const std::exception& e) {
                throw SimulationAborted(
                    fmt::format("round {}: validator '{}' failed: {}", round, validator->name(), e.what()));
            }
        }
        notify(round, Step::Validate);

        // (6) utility after adaptation
        step(round, Step::UtilityAfterAdaptation);
        record.utilityAfterAdaptation = computeUtility(model, *config.utility);
        notify(round, Step::UtilityAfterAdaptation);

        previous = record.utilityAfterAdaptation;
        snapshot(round);
        report.rounds.push_back(std::move(record));
    }

    // Events emitted by the last engine run and validators were never delivered; log them too.
    auto rest = queue.drain();
    report.events.insert(report.events.end(), rest.begin(), rest.end());
    queue.setOrigin(0, 0);

    auto& summary = report.summary;
    summary.finalUtility = previous;
    for (const auto& r : report.rounds) {
        summary.meanExecutionTimeMs += r.executionTimeMs;
        summary.maxExecutionTimeMs = std::max(summary.maxExecutionTimeMs, r.executionTimeMs);
        summary.totalModelReads += r.modelReads;
        if (r.failed) ++summary.failedRounds;
        if (!r.failed && r.violations.empty()) ++summary.roundsFullyHealed;
    }
    if (!report.rounds.empty()) summary.meanExecutionTimeMs /= static_cast<double>(report.rounds.size());

    if (!config.outputDir.empty()) writeReport(report, config.outputDir);
    return report;
}

}  // namespace mrubis::sim
