#pragma once

#include <memory>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::engines {

/// WorkingData annotation remembering a filter removed from a pipe.
inline constexpr const char* kSkippedFilter = "skipped-filter";

/// Event-driven self-optimization. For every shop with updated filter
/// statistics it sorts the pipe fastest first (AS6), removes the slowest
/// filters while the response time is above the upper threshold (AS7), and
/// re-adds remembered filters while it is below the lower one and the
/// projected time stays within the upper (AS8).
class EventDrivenOptimizingEngine final : public sim::AdaptationEngine {
public:
    EventDrivenOptimizingEngine(std::shared_ptr<const shop::ShopCatalog> catalog, shop::Thresholds thresholds);
    [[nodiscard]] std::string_view name() const override { return "event-optimizing"; }
    sim::EngineOutcome adapt(comparch::ModelHandle& engine, std::span<const comparch::ChangeEvent> events,
                             std::stop_token stop) override;

private:
    void optimize(comparch::ModelHandle& engine, comparch::Uid tenant, sim::EngineOutcome& outcome);

    std::shared_ptr<const shop::ShopCatalog> catalog_;
    shop::Thresholds thresholds_;
};

}  // namespace mrubis::engines
