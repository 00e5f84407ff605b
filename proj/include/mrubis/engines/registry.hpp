#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::engines {

std::vector<std::string> engineNames();

/// Throws std::invalid_argument for an unknown name.
std::unique_ptr<sim::AdaptationEngine> makeEngine(std::string_view name, std::shared_ptr<const shop::ShopCatalog> catalog,
                                                  const shop::Thresholds& thresholds);

}  // namespace mrubis::engines
