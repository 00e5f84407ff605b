#pragma once

#include <memory>

#include "mrubis/shop/catalog.hpp"
#include "mrubis/shop/injection.hpp"
#include "mrubis/shop/thresholds.hpp"
#include "mrubis/sim/interfaces.hpp"

namespace mrubis::shop {

using sim::Violation;

/// Structural checks that hold for any adapted architecture: required
/// interfaces connected, no UNKNOWN components, unique uids, connectors
/// inside one tenant and between interfaces of the same type.
class ArchitectureValidator final : public sim::Validator {
public:
    [[nodiscard]] std::string_view name() const override { return "architecture"; }
    std::vector<Violation> validate(comparch::ModelHandle& simulator) override;
};

/// No component above the exception threshold and every slot of every shop filled.
class SelfHealingValidator final : public sim::Validator {
public:
    SelfHealingValidator(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds);
    [[nodiscard]] std::string_view name() const override { return "self-healing"; }
    std::vector<Violation> validate(comparch::ModelHandle& simulator) override;

private:
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
};

/// Restores the PerformanceStats of re-added filters, refreshes the search
/// response time and reports broken or unordered pipes, a response time above
/// the upper threshold, and one below the lower threshold when a removed
/// filter would still fit under the upper one.
class SelfOptimizationValidator final : public sim::Validator {
public:
    SelfOptimizationValidator(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds,
                              std::shared_ptr<PipeWorld> world);
    [[nodiscard]] std::string_view name() const override { return "self-optimization"; }
    std::vector<Violation> validate(comparch::ModelHandle& simulator) override;

private:
    std::shared_ptr<const ShopCatalog> catalog_;
    Thresholds thresholds_;
    std::shared_ptr<PipeWorld> world_;
};

}  // namespace mrubis::shop
