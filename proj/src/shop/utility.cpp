#include "mrubis/shop/utility.hpp"

#include "mrubis/shop/generator.hpp"

namespace mrubis::shop {

double componentUtility(const Architecture& model, const Component& component) {
    const auto* type = model.componentType(component.type);
    const double reliability = type ? type->reliability : 0.0;
    return reliability * component.criticality * static_cast<double>(component.connectivity());
}

bool failed(const Architecture& model, const Component& component, const Thresholds& thresholds) {
    if (component.state == comparch::ComponentState::Unknown) return true;
    return model.exceptionCount(component.uid) > static_cast<std::size_t>(thresholds.cf2ExceptionThreshold);
}

double tenantUtility(const Architecture& model, Uid tenant, const Thresholds& thresholds) {
    double total = 0.0;
    for (const Component* c : model.componentsOf(tenant)) {
        if (!failed(model, *c, thresholds)) total += componentUtility(model, *c);
    }
    return total;
}

double selfHealingUtility(const Architecture& model, const Thresholds& thresholds) {
    double total = 0.0;
    for (const auto& t : model.tenants()) total += tenantUtility(model, t.uid, thresholds);
    return total;
}

double shopOptimizationUtility(const Architecture& model, const ShopCatalog& catalog, Uid tenant,
                               const Thresholds& thresholds) {
    double value = tenantUtility(model, tenant, thresholds);
    const auto pipe = tracePipe(model, catalog, tenant);
    std::vector<const Component*> measured;
    std::vector<double> averages;
    for (const Component* f : pipe.filters) {
        if (auto avg = filterAverage(model, catalog, *f)) {
            measured.push_back(f);
            averages.push_back(*avg);
        }
    }
    for (std::size_t i : misplacedPositions(averages)) {
        if (!failed(model, *measured[i], thresholds)) value -= 0.5 * componentUtility(model, *measured[i]);
    }
    auto response = responseTimeProperty(model, tenant);
    if (!response) response = responseTime(thresholds.baseQueryTimeMs, averages);
    if (*response > thresholds.responseTimeUpperMs) value *= 0.8;
    return value;
}

double selfOptimizationUtility(const Architecture& model, const ShopCatalog& catalog, const Thresholds& thresholds) {
    double total = 0.0;
    for (const auto& t : model.tenants()) total += shopOptimizationUtility(model, catalog, t.uid, thresholds);
    return total;
}

}  // namespace mrubis::shop
