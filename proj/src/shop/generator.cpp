#include "mrubis/shop/generator.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"

namespace mrubis::shop {

namespace {

using comparch::ComponentState;
using comparch::DataType;
using comparch::ModelError;
using comparch::StatsValues;

std::string drawValue(const comparch::ParameterType& type, Rng& rng) {
    switch (type.dataType) {
        case DataType::Int: {
            long base = 1;
            std::from_chars(type.defaultValue.data(), type.defaultValue.data() + type.defaultValue.size(), base);
            base = std::max(base, 1L);
            return std::to_string(std::uniform_int_distribution<long>(std::max(1L, base / 2), base * 4)(rng));
        }
        case DataType::Bool:
            return std::uniform_int_distribution<int>(0, 1)(rng) ? "true" : "false";
        case DataType::Real:
            return fmt::format("{}", std::uniform_int_distribution<int>(1, 8)(rng) / 8.0);
        case DataType::String:
            break;
    }
    return type.defaultValue;
}

StatsValues drawStats(double average, Rng& rng) {
    StatsValues v;
    v.invocationCount = std::uniform_int_distribution<std::uint64_t>(64, 512)(rng);
    v.totalTime = average * static_cast<double>(v.invocationCount);
    v.minTime = average * 0.5;
    v.maxTime = average * 2.0;
    return v;
}

void advance(comparch::ModelHandle& h, Uid component, ComponentState to) {
    auto state = h.model().component(component)->state;
    if (state == ComponentState::Undeployed) h.setState(component, ComponentState::Deployed), state = ComponentState::Deployed;
    if (to == ComponentState::Started && state == ComponentState::Deployed) h.setState(component, ComponentState::Started);
}

}  // namespace

void installTypes(Architecture& model, const ShopBlueprint& blueprint, Rng& rng) {
    std::map<std::string, Uid, std::less<>> interfaces;
    for (const auto& i : blueprint.interfaces) interfaces[i.fqName] = model.addInterfaceType(i.fqName, i.methods);
    auto lookup = [&](const std::string& fqName) {
        auto it = interfaces.find(fqName);
        if (it == interfaces.end()) throw ModelError(fmt::format("blueprint interface '{}' is not declared", fqName));
        return it->second;
    };
    for (const auto& slot : blueprint.slots) {
        comparch::ComponentTypeSpec spec;
        spec.name = slot.name;
        spec.reliability = std::uniform_int_distribution<int>(922, 1023)(rng) / 1024.0;
        spec.criticality = slot.criticality;
        spec.parameters = slot.parameters;
        for (const auto& r : slot.required) spec.requiredInterfaceTypes.push_back(lookup(r));
        for (const auto& p : slot.provided) spec.providedInterfaceTypes.push_back(lookup(p));
        model.addComponentType(spec);
        spec.name = slot.alternativeName;
        model.addComponentType(spec);
    }
}

void populateShop(comparch::ModelHandle& simulator, const ShopCatalog& catalog, Uid tenant, Rng& rng,
                  const Thresholds& thresholds) {
    const auto& model = simulator.model();
    std::vector<Uid> slotComponent(catalog.slotCount());
    for (std::size_t s = 0; s < catalog.slotCount(); ++s) {
        slotComponent[s] = simulator.instantiate(catalog.primaryType(s), tenant);
        const auto* type = model.componentType(catalog.primaryType(s));
        const auto parameters = model.component(slotComponent[s])->parameters;
        for (std::size_t p = 0; p < parameters.size(); ++p) {
            simulator.setParameter(parameters[p].uid, drawValue(type->parameterTypes[p], rng));
        }
    }

    // services: each service interface has one provider in the shop
    std::map<Uid, Uid> providerOf;
    for (std::size_t s = 0; s < catalog.slotCount(); ++s) {
        for (const auto& p : model.component(slotComponent[s])->provided) {
            if (p.type != catalog.filterInterface()) providerOf.emplace(p.type, p.uid);
        }
    }
    for (std::size_t s = 0; s < catalog.slotCount(); ++s) {
        const auto required = model.component(slotComponent[s])->required;
        for (const auto& r : required) {
            if (r.type == catalog.filterInterface()) continue;
            auto it = providerOf.find(r.type);
            if (it == providerOf.end()) {
                throw ModelError(fmt::format("no provider for '{}' in the shop",
                                             model.interfaceType(r.type)->fqName));
            }
            simulator.connect(r.uid, it->second);
        }
    }

    // pipe: fastest filter at the front
    const auto slots = catalog.filterSlots();
    std::vector<std::pair<double, Uid>> filters;
    std::vector<double> used;
    for (std::size_t s : slots) {
        double average = 0.0;
        do {
            average = std::uniform_int_distribution<int>(16, 64)(rng) / 4.0;
        } while (std::find(used.begin(), used.end(), average) != used.end() && used.size() < 49);
        used.push_back(average);
        filters.emplace_back(average, slotComponent[s]);
    }
    std::stable_sort(filters.begin(), filters.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Uid previous = slotComponent[catalog.headSlot()];
    auto link = [&](Uid from, Uid to) {
        const auto* req = filterRequired(model, catalog, *model.component(from));
        const auto* prov = filterProvided(model, catalog, *model.component(to));
        if (!req || !prov) throw ModelError("pipe component lacks the filter interface");
        simulator.connect(req->uid, prov->uid);
    };
    for (const auto& [average, component] : filters) {
        link(previous, component);
        previous = component;
    }
    link(previous, slotComponent[catalog.sinkSlot()]);

    for (Uid c : slotComponent) advance(simulator, c, ComponentState::Started);

    for (const auto& [average, component] : filters) {
        const auto* prov = filterProvided(model, catalog, *model.component(component));
        simulator.updatePerformanceStats(prov->uid, catalog.filterMethod(), drawStats(average, rng));
    }
    refreshResponseTime(simulator, catalog, tenant, thresholds);
}

Architecture generateModel(int shops, const ShopBlueprint& blueprint, const Thresholds& thresholds, Rng& rng) {
    if (shops < 1) throw std::invalid_argument(fmt::format("number of shops must be positive, got {}", shops));
    thresholds.validate();
    Architecture model("mRUBiS");
    installTypes(model, blueprint, rng);
    std::vector<Uid> tenants;
    for (int i = 1; i <= shops; ++i) tenants.push_back(model.addTenant(fmt::format("shop-{}", i)));
    model.seal();
    const auto catalog = ShopCatalog::bind(model, blueprint);
    comparch::ModelHandle simulator(comparch::Role::Simulator, model);
    for (Uid t : tenants) populateShop(simulator, catalog, t, rng, thresholds);
    (void)model.events().drain();
    return model;
}

void refreshResponseTime(comparch::ModelHandle& simulator, const ShopCatalog& catalog, Uid tenant,
                         const Thresholds& thresholds) {
    const auto& model = simulator.model();
    const auto pipe = tracePipe(model, catalog, tenant);
    const auto averages = pipeAverages(model, catalog, pipe);
    const double value = responseTime(thresholds.baseQueryTimeMs, averages);
    const auto text = fmt::format("{}", value);
    const auto* current = model.property(tenant, kResponseTimeProperty);
    if (current && current->value == text) return;
    simulator.setMonitoredProperty(tenant, kResponseTimeProperty, "response time of a search request",
                                   DataType::Real, "ms", text);
}

std::optional<double> responseTimeProperty(const Architecture& model, Uid tenant) {
    const auto* p = model.property(tenant, kResponseTimeProperty);
    if (!p) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(p->value.data(), p->value.data() + p->value.size(), value);
    if (ec != std::errc{} || ptr != p->value.data() + p->value.size()) return std::nullopt;
    return value;
}

}  // namespace mrubis::shop
