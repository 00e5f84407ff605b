#include "mrubis/shop/catalog.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"

namespace mrubis::shop {

using comparch::ModelError;

ShopCatalog ShopCatalog::bind(const Architecture& model, const ShopBlueprint& blueprint) {
    ShopCatalog c;
    c.blueprint_ = blueprint;
    auto typeUid = [&](const std::string& name) {
        const auto* t = model.componentTypeByName(name);
        if (!t) throw ModelError(fmt::format("component type '{}' is missing", name));
        return t->uid;
    };
    bool haveHead = false;
    bool haveSink = false;
    for (std::size_t i = 0; i < blueprint.slots.size(); ++i) {
        const auto& s = blueprint.slots[i];
        c.primary_.push_back(typeUid(s.name));
        c.alternative_.push_back(typeUid(s.alternativeName));
        c.slotByType_[c.primary_.back()] = i;
        c.slotByType_[c.alternative_.back()] = i;
        if (s.name == blueprint.pipeHead) c.head_ = i, haveHead = true;
        if (s.name == blueprint.pipeSink) c.sink_ = i, haveSink = true;
    }
    if (!haveHead || !haveSink) throw ModelError("blueprint pipe head or sink is not a slot");
    const auto* fi = model.interfaceTypeByName(blueprint.filterInterface);
    if (!fi || fi->methods.empty()) {
        throw ModelError(fmt::format("filter interface '{}' is missing", blueprint.filterInterface));
    }
    c.filterInterface_ = fi->uid;
    c.filterMethod_ = fi->methods.front().uid;
    return c;
}

Uid ShopCatalog::alternativeOf(Uid type) const {
    auto slot = slotOf(type);
    if (!slot) throw ModelError(fmt::format("type {} is not part of the shop blueprint", type.value));
    return primary_[*slot] == type ? alternative_[*slot] : primary_[*slot];
}

std::optional<std::size_t> ShopCatalog::slotOf(Uid componentType) const {
    auto it = slotByType_.find(componentType);
    if (it == slotByType_.end()) return std::nullopt;
    return it->second;
}

bool ShopCatalog::isFilterType(Uid componentType) const {
    auto slot = slotOf(componentType);
    return slot && blueprint_.slots[*slot].filter;
}

std::vector<std::size_t> ShopCatalog::filterSlots() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < blueprint_.slots.size(); ++i) {
        if (blueprint_.slots[i].filter) out.push_back(i);
    }
    return out;
}

const comparch::RequiredInterface* filterRequired(const Architecture& model, const ShopCatalog& catalog,
                                                  const Component& component) {
    for (const auto& r : component.required) {
        if (r.type == catalog.filterInterface()) return model.requiredInterface(r.uid);
    }
    return nullptr;
}

const comparch::ProvidedInterface* filterProvided(const Architecture& model, const ShopCatalog& catalog,
                                                  const Component& component) {
    for (const auto& p : component.provided) {
        if (p.type == catalog.filterInterface()) return model.providedInterface(p.uid);
    }
    return nullptr;
}

PipeView tracePipe(const Architecture& model, const ShopCatalog& catalog, Uid tenant) {
    PipeView view;
    view.tenant = tenant;
    for (const Component* c : model.componentsOf(tenant)) {
        auto slot = catalog.slotOf(c->type);
        if (slot == catalog.headSlot() && !view.head) view.head = c;
    }
    if (!view.head) {
        view.problem = "pipe head missing";
        return view;
    }
    std::set<Uid> visited{view.head->uid};
    const Component* current = view.head;
    while (true) {
        const auto* req = filterRequired(model, catalog, *current);
        if (!req) {
            view.problem = fmt::format("component {} has no filter interface", current->uid.value);
            return view;
        }
        auto provider = model.connectedProvider(req->uid);
        if (!provider) {
            view.problem = fmt::format("filter interface of component {} is unconnected", current->uid.value);
            return view;
        }
        auto owner = model.interfaceOwner(*provider);
        const Component* next = owner ? model.component(*owner) : nullptr;
        if (!next) {
            view.problem = "dangling filter connector";
            return view;
        }
        if (!visited.insert(next->uid).second) {
            view.problem = fmt::format("pipe cycles at component {}", next->uid.value);
            return view;
        }
        if (catalog.isFilterType(next->type)) {
            view.filters.push_back(next);
            current = next;
            continue;
        }
        if (catalog.slotOf(next->type) != catalog.sinkSlot()) {
            view.problem = fmt::format("pipe ends at component {} which is not the sink", next->uid.value);
            return view;
        }
        view.sink = next;
        view.intact = true;
        return view;
    }
}

std::optional<double> filterAverage(const Architecture& model, const ShopCatalog& catalog, const Component& filter) {
    const auto* p = filterProvided(model, catalog, filter);
    if (!p) return std::nullopt;
    for (const auto& s : p->stats) {
        if (s.method == catalog.filterMethod()) return s.values.average();
    }
    return std::nullopt;
}

std::vector<double> pipeAverages(const Architecture& model, const ShopCatalog& catalog, const PipeView& pipe) {
    std::vector<double> out;
    for (const Component* f : pipe.filters) {
        if (auto avg = filterAverage(model, catalog, *f)) out.push_back(*avg);
    }
    return out;
}

double responseTime(double base, std::span<const double> averages) {
    double total = base;
    for (double a : averages) total += a;
    return total;
}

double projectedWithInsert(double base, std::span<const double> averages, double average) {
    std::vector<double> v(averages.begin(), averages.end());
    // position after the last element that is <= average; keeps equal ones in front
    std::size_t pos = v.size();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > average) {
            pos = i;
            break;
        }
    }
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(pos), average);
    return responseTime(base, v);
}

std::vector<std::size_t> misplacedPositions(std::span<const double> averages) {
    const std::size_t n = averages.size();
    if (n == 0) return {};
    // longest[i]: length of the longest non-decreasing subsequence starting at i
    std::vector<std::size_t> longest(n, 1);
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (averages[j] >= averages[i]) longest[i] = std::max(longest[i], longest[j] + 1);
        }
    }
    std::size_t need = *std::max_element(longest.begin(), longest.end());
    std::vector<bool> kept(n, false);
    std::size_t from = 0;
    bool havePrev = false;
    double prev = 0.0;
    while (need > 0) {
        std::optional<std::size_t> pick;
        for (std::size_t j = from; j < n; ++j) {
            if (longest[j] < need || (havePrev && averages[j] < prev)) continue;
            if (!pick || averages[j] < averages[*pick]) pick = j;
        }
        kept[*pick] = true;
        prev = averages[*pick];
        havePrev = true;
        from = *pick + 1;
        --need;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!kept[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> missingSlots(const Architecture& model, const ShopCatalog& catalog, Uid tenant) {
    std::vector<bool> present(catalog.slotCount(), false);
    for (const Component* c : model.componentsOf(tenant)) {
        if (auto slot = catalog.slotOf(c->type)) present[*slot] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < present.size(); ++i) {
        if (!present[i]) out.push_back(i);
    }
    return out;
}

std::optional<Uid> resolveProvider(const Architecture& model, Uid tenant, Uid interfaceType,
                                   std::optional<Uid> excludeComponent) {
    std::vector<const comparch::ProvidedInterface*> candidates;
    for (const Component* c : model.componentsOf(tenant)) {
        if (excludeComponent && c->uid == *excludeComponent) continue;
        for (const auto& p : c->provided) {
            if (p.type == interfaceType) candidates.push_back(&p);
        }
    }
    if (candidates.size() == 1) return candidates.front()->uid;
    std::optional<Uid> free;
    for (const auto* p : candidates) {
        if (!p->connectors.empty()) continue;
        if (free) return std::nullopt;
        free = p->uid;
    }
    return free;
}

std::optional<Uid> resolveProvider(const Architecture& model, Uid requiredInterface) {
    const auto* req = model.requiredInterface(requiredInterface);
    if (!req) return std::nullopt;
    auto tenant = model.tenantOf(req->component);
    if (!tenant) return std::nullopt;
    return resolveProvider(model, *tenant, req->type, req->component);
}

}  // namespace mrubis::shop
