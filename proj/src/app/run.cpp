#include "mrubis/app/run.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mrubis/engines/registry.hpp"
#include "mrubis/shop/generator.hpp"
#include "mrubis/shop/utility.hpp"
#include "mrubis/shop/validators.hpp"

namespace mrubis::app {

namespace {

using Json = nlohmann::json;
using sim::IssueKind;

template <typename T>
T read(const Json& value, std::string_view key) {
    try {
        return value.get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
    }
}

int readInt(const Json& value, std::string_view key) {
    if (!value.is_number_integer()) throw ConfigError(fmt::format("config key '{}' must be an integer", key));
    return read<int>(value, key);
}

double readNumber(const Json& value, std::string_view key) {
    if (!value.is_number()) throw ConfigError(fmt::format("config key '{}' must be a number", key));
    return read<double>(value, key);
}

std::string readString(const Json& value, std::string_view key) {
    if (!value.is_string()) throw ConfigError(fmt::format("config key '{}' must be a string", key));
    return read<std::string>(value, key);
}

void applyThresholds(shop::Thresholds& t, const Json& json) {
    if (!json.is_object()) throw ConfigError("config key 'thresholds' must be an object");
    for (const auto& [key, value] : json.items()) {
        if (key == "cf2_exception_threshold") t.cf2ExceptionThreshold = readInt(value, key);
        else if (key == "cf4_repeat_count") t.cf4RepeatCount = readInt(value, key);
        else if (key == "response_time_upper_ms") t.responseTimeUpperMs = readNumber(value, key);
        else if (key == "response_time_lower_ms") t.responseTimeLowerMs = readNumber(value, key);
        else if (key == "base_query_time_ms") t.baseQueryTimeMs = readNumber(value, key);
        else throw ConfigError(fmt::format("unknown config key 'thresholds.{}'", key));
    }
}

}  // namespace

std::vector<std::string> scenarioNames() { return {"self-healing-basic", "self-optimization-basic"}; }

std::string engineFor(const RunSettings& settings) {
    if (!settings.engine.empty()) return settings.engine;
    return settings.scenario == "self-optimization-basic" ? "event-optimizing" : "event-healing";
}

void applyConfig(RunSettings& settings, std::string_view text) {
    Json json;
    try {
        json = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!json.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : json.items()) {
        if (key == "shops") settings.shops = readInt(value, key);
        else if (key == "rounds") settings.rounds = readInt(value, key);
        else if (key == "seed") {
            if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
                throw ConfigError("config key 'seed' must be a non-negative integer");
            }
            settings.seed = value.get<std::uint64_t>();
        } else if (key == "scenario") settings.scenario = readString(value, key);
        else if (key == "engine") settings.engine = readString(value, key);
        else if (key == "output_dir") settings.outputDir = readString(value, key);
        else if (key == "snapshot_rounds") {
            if (!value.is_array()) throw ConfigError("config key 'snapshot_rounds' must be an array");
            settings.snapshotRounds.clear();
            for (const auto& r : value) settings.snapshotRounds.insert(readInt(r, key));
        } else if (key == "thresholds") applyThresholds(settings.thresholds, value);
        else throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
}

void applyConfigFile(RunSettings& settings, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    applyConfig(settings, buffer.str());
}

void checkSettings(const RunSettings& settings) {
    if (settings.shops < 1) throw ConfigError(fmt::format("shops must be positive, got {}", settings.shops));
    if (settings.rounds < 0) throw ConfigError(fmt::format("rounds must be non-negative, got {}", settings.rounds));
    const auto scenarios = scenarioNames();
    if (std::find(scenarios.begin(), scenarios.end(), settings.scenario) == scenarios.end()) {
        throw ConfigError(fmt::format("unknown scenario '{}'", settings.scenario));
    }
    const auto engines = engines::engineNames();
    if (std::find(engines.begin(), engines.end(), engineFor(settings)) == engines.end()) {
        throw ConfigError(fmt::format("unknown engine '{}'", settings.engine));
    }
    for (int r : settings.snapshotRounds) {
        if (r < 0 || r > settings.rounds) {
            throw ConfigError(fmt::format("snapshot round {} outside 0..{}", r, settings.rounds));
        }
    }
    if (settings.engineTimeout.count() <= 0) throw ConfigError("engine timeout must be positive");
    try {
        settings.thresholds.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::uint64_t generationSeed(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6d52u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::unique_ptr<Assembly> assemble(const RunSettings& settings) {
    checkSettings(settings);
    sim::Rng rng(generationSeed(settings.seed));
    return assemble(settings, shop::generateModel(settings.shops, shop::standardBlueprint(), settings.thresholds, rng));
}

std::unique_ptr<Assembly> assemble(const RunSettings& settings, comparch::Architecture model) {
    checkSettings(settings);
    auto a = std::make_unique<Assembly>();
    a->model = std::move(model);
    a->catalog = std::make_shared<const shop::ShopCatalog>(shop::ShopCatalog::bind(a->model, shop::standardBlueprint()));
    a->history = std::make_shared<shop::InjectionHistory>();
    a->world = std::make_shared<shop::PipeWorld>();
    a->world->observe(a->model, *a->catalog);

    const auto& t = settings.thresholds;
    auto& c = a->config;
    c.rounds = settings.rounds;
    c.seed = settings.seed;
    c.snapshotRounds = settings.snapshotRounds;
    c.outputDir = settings.outputDir;
    c.engineTimeout = settings.engineTimeout;
    c.validators.push_back(std::make_shared<shop::ArchitectureValidator>());
    if (settings.scenario == "self-healing-basic") {
        c.scenario = std::make_shared<shop::SelfHealingScenario>(t, a->history);
        for (IssueKind k : {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3, IssueKind::CF4, IssueKind::CF5}) {
            c.injectors[k] = std::make_shared<shop::CriticalFailureInjector>(k, t, a->history);
        }
        c.validators.push_back(std::make_shared<shop::SelfHealingValidator>(a->catalog, t));
        c.utility = std::make_shared<shop::SelfHealingUtility>(t);
    } else {
        c.scenario = std::make_shared<shop::SelfOptimizationScenario>(a->catalog);
        for (IssueKind k : {IssueKind::PI1, IssueKind::PI2, IssueKind::PI3}) {
            c.injectors[k] = std::make_shared<shop::PerformanceIssueInjector>(k, a->catalog, t, a->world);
        }
        c.validators.push_back(std::make_shared<shop::SelfOptimizationValidator>(a->catalog, t, a->world));
        c.utility = std::make_shared<shop::SelfOptimizationUtility>(a->catalog, t);
    }
    a->engine = engines::makeEngine(engineFor(settings), a->catalog, t);
    return a;
}

sim::SimulationReport run(const RunSettings& settings) {
    auto a = assemble(settings);
    return sim::runSimulation(a->config, a->model, *a->engine);
}

}  // namespace mrubis::app
