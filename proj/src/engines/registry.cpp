#include "mrubis/engines/registry.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "mrubis/engines/healing.hpp"
#include "mrubis/engines/optimizing.hpp"

namespace mrubis::engines {

std::vector<std::string> engineNames() { return {"monolithic", "mape", "event-healing", "event-optimizing", "noop"}; }

std::unique_ptr<sim::AdaptationEngine> makeEngine(std::string_view name, std::shared_ptr<const shop::ShopCatalog> catalog,
                                                  const shop::Thresholds& thresholds) {
    if (name == "monolithic") return std::make_unique<MonolithicEngine>(catalog, thresholds);
    if (name == "mape") return std::make_unique<MapeEngine>(catalog, thresholds);
    if (name == "event-healing") return std::make_unique<EventDrivenHealingEngine>(catalog, thresholds);
    if (name == "event-optimizing") return std::make_unique<EventDrivenOptimizingEngine>(catalog, thresholds);
    if (name == "noop") return std::make_unique<sim::NoopEngine>();
    throw std::invalid_argument(fmt::format("unknown engine '{}'", name));
}

}  // namespace mrubis::engines
