#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::shop {

using sim::IssueKind;
using sim::Rng;

/// Simulator-side record of CF1/CF2 hits per component. Shared by the
/// healing scenario (CF4 eligibility) and the injectors.
class InjectionHistory {
public:
    [[nodiscard]] int hits(Uid component) const;
    [[nodiscard]] std::optional<IssueKind> lastKind(Uid component) const;
    void record(Uid component, IssueKind kind);
    void forget(Uid component) { entries_.erase(component); }

private:
    std::map<Uid, std::pair<int, IssueKind>> entries_;
};

/// Simulator-side ground truth of the filter performance per (shop, slot).
/// Keeps the values of filters that were removed from the pipe, so a
/// re-added filter gets its PerformanceStats back.
class PipeWorld {
public:
    /// Records every measured filter of the model that is not known yet.
    void observe(const Architecture& model, const ShopCatalog& catalog);
    [[nodiscard]] std::optional<comparch::StatsValues> stats(Uid tenant, std::size_t slot) const;
    void set(Uid tenant, std::size_t slot, const comparch::StatsValues& values);

private:
    std::map<std::pair<Uid, std::size_t>, comparch::StatsValues> stats_;
};

/// CF1..CF5. CF1, CF2 and CF4 target a component, CF3 a component, CF5 a connector.
class CriticalFailureInjector final : public sim::Injector {
public:
    CriticalFailureInjector(IssueKind kind, Thresholds thresholds, std::shared_ptr<InjectionHistory> history);
    void inject(comparch::ModelHandle& simulator, Uid target, Rng& rng) override;

private:
    void crash(comparch::ModelHandle& simulator, Uid component);
    void raiseExceptions(comparch::ModelHandle& simulator, Uid component, Rng& rng);

    IssueKind kind_;
    Thresholds thresholds_;
    std::shared_ptr<InjectionHistory> history_;
};

/// PI1..PI3 on a shop (tenant).
class PerformanceIssueInjector final : public sim::Injector {
public:
    PerformanceIssueInjector(IssueKind kind, std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds,
                             std::shared_ptr<PipeWorld> world);
    void inject(comparch::ModelHandle& simulator, Uid target, Rng& rng) override;

private:
    IssueKind kind_;
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
    std::shared_ptr<PipeWorld> world_;
};

/// One critical failure per round. The kind is uniform over the kinds that
/// have a target; the target is uniform over the candidates in structural
/// order. CF4 is offered only for components whose history reached
/// cf4RepeatCount - 1 hits, and such components are not offered for CF1/CF2.
class SelfHealingScenario final : public sim::Scenario {
public:
    SelfHealingScenario(Thresholds thresholds, std::shared_ptr<InjectionHistory> history);
    [[nodiscard]] std::string_view name() const override { return "self-healing-basic"; }
    [[nodiscard]] std::vector<IssueKind> producibleIssues() const override;
    std::vector<sim::Injection> nextInjections(int round, const Architecture& model, Rng& rng) override;

private:
    Thresholds thresholds_;
    std::shared_ptr<InjectionHistory> history_;
};

/// One performance issue per round on a uniformly chosen shop. PI1 needs two
/// filters in the pipe, PI2 one, PI3 a filter removed from the pipe.
class SelfOptimizationScenario final : public sim::Scenario {
public:
    explicit SelfOptimizationScenario(std::shared_ptr<const ShopCatalog> catalog);
    [[nodiscard]] std::string_view name() const override { return "self-optimization-basic"; }
    [[nodiscard]] std::vector<IssueKind> producibleIssues() const override;
    std::vector<sim::Injection> nextInjections(int round, const Architecture& model, Rng& rng) override;

private:
    std::shared_ptr<const ShopCatalog> catalog_;
};

}  // namespace mrubis::shop
