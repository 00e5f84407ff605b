// mrubis: generate shop architectures, run simulations, validate snapshots.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mrubis/app/run.hpp"
#include "mrubis/comparch/errors.hpp"
#include "mrubis/comparch/snapshot.hpp"
#include "mrubis/engines/registry.hpp"
#include "mrubis/shop/generator.hpp"
#include "mrubis/shop/validators.hpp"

namespace {

using namespace mrubis;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFault = 2;

std::set<int> parseRounds(const std::string& list) {
    std::set<int> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            int r = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.insert(r);
        } catch (const std::exception&) {
            throw app::ConfigError(fmt::format("bad snapshot round '{}'", item));
        }
    }
    return out;
}

int generate(int shops, std::uint64_t seed, const std::string& out) {
    if (shops < 1) throw app::ConfigError("--shops must be positive");
    sim::Rng rng(app::generationSeed(seed));
    auto model = shop::generateModel(shops, shop::standardBlueprint(), shop::Thresholds{}, rng);
    comparch::writeSnapshot(model, out);
    fmt::print("{}: {} tenants, {} components, {} connectors\n", out, model.tenants().size(), model.componentCount(),
               model.connectorCount());
    return kOk;
}

int validate(const std::string& path) {
    auto model = comparch::readSnapshot(path);
    comparch::ModelHandle handle(comparch::Role::Simulator, model);
    std::vector<sim::Violation> found = shop::ArchitectureValidator{}.validate(handle);
    try {
        auto catalog = std::make_shared<const shop::ShopCatalog>(shop::ShopCatalog::bind(model, shop::standardBlueprint()));
        auto more = shop::SelfHealingValidator(catalog, shop::Thresholds{}).validate(handle);
        found.insert(found.end(), more.begin(), more.end());
    } catch (const comparch::ModelError& e) {
        fmt::print("note: shop checks skipped: {}\n", e.what());
    }
    for (const auto& v : found) fmt::print("[{}] {} @{}: {}\n", v.validator, v.code, v.subject.value, v.message);
    fmt::print("{}: {} violation(s)\n", path, found.size());
    return found.empty() ? kOk : kFault;
}

int list(const std::string& what) {
    if (what == "engines") {
        for (const auto& n : engines::engineNames()) fmt::print("{}\n", n);
    } else if (what == "scenarios") {
        for (const auto& n : app::scenarioNames()) fmt::print("{}\n", n);
    } else {
        for (auto k : sim::kAllIssueKinds) fmt::print("{}\t{}\n", sim::toString(k), sim::describe(k));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Simulator for self-adaptive multi-tenant shops"};
    cli.require_subcommand(1);

    auto* gen = cli.add_subcommand("generate", "write a generated architecture snapshot");
    int genShops = 0;
    std::uint64_t genSeed = 1;
    std::string genOut;
    gen->add_option("--shops", genShops, "number of shops")->required();
    gen->add_option("--seed", genSeed, "random seed");
    gen->add_option("--out", genOut, "snapshot file")->required();

    auto* simulate = cli.add_subcommand("simulate", "run a simulation");
    std::string config;
    std::string caseName;
    int shops = 0;
    int rounds = 0;
    std::uint64_t seed = 0;
    std::string engine;
    std::string out;
    std::string snapshots;
    long timeoutMs = 0;
    simulate->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    auto* caseOpt = simulate->add_option("--case", caseName, "healing or optimization")
                        ->check(CLI::IsMember({"healing", "optimization"}));
    auto* shopsOpt = simulate->add_option("--shops", shops, "number of shops");
    auto* roundsOpt = simulate->add_option("--rounds", rounds, "number of rounds");
    auto* seedOpt = simulate->add_option("--seed", seed, "random seed");
    auto* engineOpt = simulate->add_option("--engine", engine, "adaptation engine")
                          ->check(CLI::IsMember(engines::engineNames()));
    auto* outOpt = simulate->add_option("--out", out, "output directory");
    auto* snapOpt = simulate->add_option("--snapshot-rounds", snapshots, "comma separated rounds to snapshot");
    auto* timeoutOpt = simulate->add_option("--engine-timeout-ms", timeoutMs, "per-round engine budget");

    auto* check = cli.add_subcommand("validate", "validate an architecture snapshot");
    std::string modelPath;
    check->add_option("--model", modelPath, "snapshot file")->required()->check(CLI::ExistingFile);

    auto* lister = cli.add_subcommand("list", "list engines, scenarios or issues");
    std::string what;
    lister->add_option("what", what, "engines|scenarios|issues")
        ->required()
        ->check(CLI::IsMember({"engines", "scenarios", "issues"}));

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return kUsage;
    }

    try {
        if (*gen) return generate(genShops, genSeed, genOut);
        if (*check) return validate(modelPath);
        if (*lister) return list(what);

        app::RunSettings settings;
        if (!config.empty()) app::applyConfigFile(settings, config);
        if (*caseOpt) settings.scenario = caseName == "healing" ? "self-healing-basic" : "self-optimization-basic";
        if (*shopsOpt) settings.shops = shops;
        if (*roundsOpt) settings.rounds = rounds;
        if (*seedOpt) settings.seed = seed;
        if (*engineOpt) settings.engine = engine;
        if (*outOpt) settings.outputDir = out;
        if (*snapOpt) settings.snapshotRounds = parseRounds(snapshots);
        if (*timeoutOpt) settings.engineTimeout = std::chrono::milliseconds(timeoutMs);

        const auto report = app::run(settings);
        const auto& s = report.summary;
        fmt::print("{} / {}: {} rounds, utility {} -> {}, {} fully healed, {} failed, output in {}\n", report.engine,
                   report.scenario, report.rounds.size(), s.initialUtility, s.finalUtility, s.roundsFullyHealed,
                   s.failedRounds, settings.outputDir.string());
        return s.failedRounds == 0 ? kOk : kFault;
    } catch (const app::ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        fmt::print(stderr, "fault: {}\n", e.what());
        return kFault;
    }
}
