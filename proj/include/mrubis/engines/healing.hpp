#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::engines {

using comparch::Architecture;
using comparch::ModelHandle;
using comparch::Uid;
using shop::ShopCatalog;
using shop::Thresholds;
using sim::AppliedStrategy;
using sim::IssueKind;

/// A critical failure found by an engine.
struct Failure {
    IssueKind kind{};
    Uid tenant;
    /// CF1/CF2/CF4: the component. CF3: the tenant. CF5: the unconnected required interface.
    Uid subject;
    /// CF3: slot to refill and the type to instantiate.
    std::size_t slot = 0;
    Uid type;
};

/// Where a replacement has to be wired, as seen before the old component vanished.
struct WiringHints {
    std::vector<Uid> providers;   // provided interfaces the old component required
    std::vector<Uid> dependents;  // required interfaces that were connected to the old component
};

/// AS1 restart, AS2 redeploy, AS3 replace by same type, AS4 replace by another type, AS5 reconnect.
std::string_view strategyFor(IssueKind kind);
/// Relative costs of AS1..AS8.
double strategyCost(std::string_view strategy);

/// Records a CF1/CF2 hit on a component and returns its hit count.
using HitCounter = std::function<int(Uid component)>;

/// Full scan of the model, tenant by tenant: missing components first (CF3),
/// then failed components (CF1/CF2, CF4 once a component reaches the repeat
/// count), then unconnected required interfaces (CF5) in tenants that miss
/// no component.
std::vector<Failure> scanFailures(const Architecture& model, const ShopCatalog& catalog, const Thresholds& thresholds,
                                  const HitCounter& hit);

/// Classifies a failed component; empty when it is healthy.
std::optional<Failure> componentFailure(const Architecture& model, const Thresholds& thresholds, Uid component,
                                        const HitCounter& hit);

/// Utility lost through the failure, i.e. the increase the repair should bring.
double utilityDrop(const Architecture& model, const ShopCatalog& catalog, const Thresholds& thresholds,
                   const Failure& failure);

/// Executes the strategy for `failure`. Hints replace provider resolution
/// where they are still valid.
AppliedStrategy repair(ModelHandle& engine, const ShopCatalog& catalog, const Failure& failure,
                       const WiringHints* hints = nullptr);

/// Scans the whole model every round and repairs what it finds.
class MonolithicEngine final : public sim::AdaptationEngine {
public:
    MonolithicEngine(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds);
    [[nodiscard]] std::string_view name() const override { return "monolithic"; }
    sim::EngineOutcome adapt(ModelHandle& engine, std::span<const comparch::ChangeEvent> events,
                             std::stop_token stop) override;

private:
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
    std::map<Uid, int> hits_;
};

/// Monitor / analyze / plan / execute over the model. Findings are kept in
/// the model as annotations: Issues and AdaptationStrategies of the current
/// run, and the per-component hit counts as WorkingData.
class MapeEngine final : public sim::AdaptationEngine {
public:
    MapeEngine(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds);
    [[nodiscard]] std::string_view name() const override { return "mape"; }
    sim::EngineOutcome adapt(ModelHandle& engine, std::span<const comparch::ChangeEvent> events,
                             std::stop_token stop) override;

private:
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
};

/// Reacts to the delivered change events only; reads just the elements they
/// name and the tenants they concern.
class EventDrivenHealingEngine final : public sim::AdaptationEngine {
public:
    EventDrivenHealingEngine(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds);
    [[nodiscard]] std::string_view name() const override { return "event-healing"; }
    sim::EngineOutcome adapt(ModelHandle& engine, std::span<const comparch::ChangeEvent> events,
                             std::stop_token stop) override;

private:
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
    std::map<Uid, int> hits_;
};

}  // namespace mrubis::engines
