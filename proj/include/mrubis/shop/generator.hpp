#pragma once

#include "mrubis/comparch/model_handle.hpp"
#include "mrubis/shop/blueprint.hpp"
#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::shop {

using sim::Rng;

/// Adds every blueprint interface and both component types of every slot.
/// Reliabilities are drawn per slot from (0.9, 1.0) on a 1/1024 grid; the
/// alternative type shares reliability, criticality and interfaces.
void installTypes(Architecture& model, const ShopBlueprint& blueprint, Rng& rng);

/// Instantiates, configures, wires and starts one component per slot in
/// `tenant`, seeds the filter PerformanceStats (average 4..16 ms, distinct
/// within the shop) with the pipe sorted fastest first, and sets the search
/// response time property.
void populateShop(comparch::ModelHandle& simulator, const ShopCatalog& catalog, Uid tenant, Rng& rng,
                  const Thresholds& thresholds);

/// A model with `shops` tenants named "shop-1".."shop-N". The change events
/// produced while building are discarded.
Architecture generateModel(int shops, const ShopBlueprint& blueprint, const Thresholds& thresholds, Rng& rng);

/// Sets the search response time property of `tenant` from its current pipe.
void refreshResponseTime(comparch::ModelHandle& simulator, const ShopCatalog& catalog, Uid tenant,
                         const Thresholds& thresholds);

/// Value of the search response time property, if set and numeric.
std::optional<double> responseTimeProperty(const Architecture& model, Uid tenant);

}  // namespace mrubis::shop
