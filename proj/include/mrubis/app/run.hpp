#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/injection.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/simulator.hpp"

namespace mrubis::app {

/// Bad configuration or command line value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunSettings {
    int shops = 5;
    int rounds = 10;
    std::uint64_t seed = 1;
    std::string scenario = "self-healing-basic";
    /// Empty selects the event-driven engine matching the scenario.
    std::string engine;
    std::filesystem::path outputDir = "mrubis-out";
    std::set<int> snapshotRounds;
    shop::Thresholds thresholds;
    std::chrono::milliseconds engineTimeout{60'000};
};

std::vector<std::string> scenarioNames();

/// settings.engine, or the default engine of the scenario when it is empty.
std::string engineFor(const RunSettings& settings);

/// Applies a JSON object onto `settings`. Unknown keys and ill-typed values throw ConfigError.
void applyConfig(RunSettings& settings, std::string_view json);
void applyConfigFile(RunSettings& settings, const std::filesystem::path& path);

/// Throws ConfigError when a value is out of range or a name is unknown.
void checkSettings(const RunSettings& settings);

/// Seed of the model generator, derived from the run seed so that generation
/// and injection draw from different streams.
std::uint64_t generationSeed(std::uint64_t seed);

/// A generated model with everything the run needs wired to it.
struct Assembly {
    comparch::Architecture model{"mRUBiS"};
    std::shared_ptr<const shop::ShopCatalog> catalog;
    std::shared_ptr<shop::InjectionHistory> history;
    std::shared_ptr<shop::PipeWorld> world;
    sim::SimulatorConfig config;
    std::unique_ptr<sim::AdaptationEngine> engine;
};

/// Generates the model from the settings (unless `model` is given) and builds
/// scenario, injectors, validators, utility and engine.
std::unique_ptr<Assembly> assemble(const RunSettings& settings);
std::unique_ptr<Assembly> assemble(const RunSettings& settings, comparch::Architecture model);

/// assemble + runSimulation. The report is written to settings.outputDir unless it is empty.
sim::SimulationReport run(const RunSettings& settings);

}  // namespace mrubis::app
