#pragma once

#include <memory>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::shop {

/// reliability x criticality x connectivity.
double componentUtility(const Architecture& model, const Component& component);

/// UNKNOWN, or more exceptions in the current deployment than the threshold.
bool failed(const Architecture& model, const Component& component, const Thresholds& thresholds);

/// Sum of the utilities of the tenant's components that are not failed.
double tenantUtility(const Architecture& model, Uid tenant, const Thresholds& thresholds);

double selfHealingUtility(const Architecture& model, const Thresholds& thresholds);

/// Per shop: the self-healing utility, minus half the utility of every
/// misplaced filter, times 0.8 when the search response time exceeds the
/// upper threshold.
double shopOptimizationUtility(const Architecture& model, const ShopCatalog& catalog, Uid tenant,
                               const Thresholds& thresholds);

double selfOptimizationUtility(const Architecture& model, const ShopCatalog& catalog, const Thresholds& thresholds);

class SelfHealingUtility final : public sim::UtilityFunction {
public:
    explicit SelfHealingUtility(Thresholds thresholds) : thresholds_(thresholds) {}
    [[nodiscard]] double utility(const Architecture& model) const override {
        return selfHealingUtility(model, thresholds_);
    }

private:
    Thresholds thresholds_;
};

class SelfOptimizationUtility final : public sim::UtilityFunction {
public:
    SelfOptimizationUtility(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds)
        : catalog_(std::move(catalog)), thresholds_(thresholds) {}
    [[nodiscard]] double utility(const Architecture& model) const override {
        return selfOptimizationUtility(model, *catalog_, thresholds_);
    }

private:
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
};

}  // namespace mrubis::shop
