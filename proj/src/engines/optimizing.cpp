#include "mrubis/engines/optimizing.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"

namespace mrubis::engines {

namespace {

using comparch::Component;
using comparch::ComponentState;
using comparch::ModelHandle;
using comparch::Uid;
using comparch::WorkingData;
using shop::ShopCatalog;

struct Remembered {
    Uid annotation;
    Uid type;
    double average;
};

std::vector<Remembered> remembered(const comparch::Architecture& model, Uid tenant) {
    std::vector<Remembered> out;
    for (const auto& [uid, a] : model.annotations()) {
        const auto* w = std::get_if<WorkingData>(&a.body);
        if (!w || a.name != kSkippedFilter || w->concernedElements.size() < 2 || w->concernedElements[0] != tenant) {
            continue;
        }
        double average = 0.0;
        auto [ptr, ec] = std::from_chars(w->value.data(), w->value.data() + w->value.size(), average);
        if (ec != std::errc{}) continue;
        out.push_back({uid, w->concernedElements[1], average});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.average < b.average; });
    return out;
}

Uid filterConnector(const comparch::Architecture& model, const ShopCatalog& catalog, const Component& c) {
    const auto* req = shop::filterRequired(model, catalog, c);
    if (!req || !req->connector) throw comparch::ModelError(fmt::format("component {} has no filter connector", c.uid.value));
    return *req->connector;
}

}  // namespace

EventDrivenOptimizingEngine::EventDrivenOptimizingEngine(std::shared_ptr<const ShopCatalog> catalog,
                                                         shop::Thresholds thresholds)
    : catalog_(std::move(catalog)), thresholds_(thresholds) {}

sim::EngineOutcome EventDrivenOptimizingEngine::adapt(ModelHandle& engine,
                                                      std::span<const comparch::ChangeEvent> events,
                                                      std::stop_token stop) {
    sim::EngineOutcome outcome;
    std::vector<Uid> tenants;
    for (const auto& e : events) {
        if (e.kind != comparch::ChangeEventKind::PerformanceStatsUpdated) continue;
        auto component = e.getUid("component");
        if (!component) continue;
        auto tenant = engine.model().tenantOf(*component);
        if (tenant && std::find(tenants.begin(), tenants.end(), *tenant) == tenants.end()) tenants.push_back(*tenant);
    }
    for (Uid t : tenants) {
        if (stop.stop_requested()) break;
        optimize(engine, t, outcome);
    }
    return outcome;
}

void EventDrivenOptimizingEngine::optimize(ModelHandle& engine, Uid tenant, sim::EngineOutcome& outcome) {
    const auto& model = engine.model();
    const auto& catalog = *catalog_;
    const auto pipe = shop::tracePipe(model, catalog, tenant);
    if (!pipe.intact) {
        outcome.notes.push_back(fmt::format("shop {}: {}", tenant.value, pipe.problem));
        return;
    }
    std::vector<std::pair<double, const Component*>> filters;
    for (const Component* f : pipe.filters) {
        auto avg = shop::filterAverage(model, catalog, *f);
        if (!avg) {
            outcome.notes.push_back(fmt::format("shop {}: filter {} not measured yet", tenant.value, f->uid.value));
            return;
        }
        filters.emplace_back(*avg, f);
    }
    const Uid head = pipe.head->uid;
    const Uid sink = pipe.sink->uid;

    // AS6: fastest filter first
    std::vector<double> current;
    for (const auto& f : filters) current.push_back(f.first);
    if (!shop::misplacedPositions(current).empty()) {
        std::stable_sort(filters.begin(), filters.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Uid> chain{head};
        for (const auto& f : filters) chain.push_back(f.second->uid);
        chain.push_back(sink);
        std::size_t rerouted = 0;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const auto* from = model.component(chain[i]);
            const Uid want = shop::filterProvided(model, catalog, *model.component(chain[i + 1]))->uid;
            const auto* req = shop::filterRequired(model, catalog, *from);
            if (model.connectedProvider(req->uid) == want) continue;
            engine.reroute(*req->connector, want);
            ++rerouted;
        }
        outcome.strategiesApplied.push_back({"AS6", tenant, fmt::format("reordered pipe, {} connectors rerouted", rerouted)});
    }

    auto averages = [&] {
        std::vector<double> v;
        for (const auto& f : filters) v.push_back(f.first);
        return v;
    };
    auto predecessor = [&](std::size_t i) { return i == 0 ? head : filters[i - 1].second->uid; };
    auto successor = [&](std::size_t i) { return i + 1 >= filters.size() ? sink : filters[i + 1].second->uid; };

    // AS7: drop the slowest filters until the response time fits
    while (!filters.empty() &&
           shop::responseTime(thresholds_.baseQueryTimeMs, averages()) > thresholds_.responseTimeUpperMs) {
        std::size_t slowest = 0;
        for (std::size_t i = 1; i < filters.size(); ++i) {
            if (filters[i].first >= filters[slowest].first) slowest = i;
        }
        const Component* f = filters[slowest].second;
        const Uid uid = f->uid;
        const Uid type = f->type;
        const double average = filters[slowest].first;
        const Uid prev = predecessor(slowest);
        const Uid next = successor(slowest);
        engine.reroute(filterConnector(model, catalog, *model.component(prev)),
                       shop::filterProvided(model, catalog, *model.component(next))->uid);
        engine.removeComponent(uid);
        engine.annotate({{}, kSkippedFilter, "working-data", catalog.slot(*catalog.slotOf(type)).name,
                         WorkingData{fmt::format("{}", average), "ms", {tenant, type}}});
        filters.erase(filters.begin() + static_cast<std::ptrdiff_t>(slowest));
        outcome.strategiesApplied.push_back({"AS7", uid, fmt::format("removed filter with average {} ms", average)});
    }

    if (shop::responseTime(thresholds_.baseQueryTimeMs, averages()) > thresholds_.responseTimeUpperMs) {
        outcome.notes.push_back(fmt::format("shop {}: response time goal infeasible even without filters", tenant.value));
    }

    // AS8: re-add remembered filters while too fast and they still fit
    for (const auto& r : remembered(model, tenant)) {
        const auto now = averages();
        if (!(shop::responseTime(thresholds_.baseQueryTimeMs, now) < thresholds_.responseTimeLowerMs)) break;
        if (shop::projectedWithInsert(thresholds_.baseQueryTimeMs, now, r.average) > thresholds_.responseTimeUpperMs) {
            continue;
        }
        std::size_t pos = filters.size();
        for (std::size_t i = 0; i < filters.size(); ++i) {
            if (filters[i].first > r.average) {
                pos = i;
                break;
            }
        }
        const Uid prev = pos == 0 ? head : filters[pos - 1].second->uid;
        const Uid next = pos == filters.size() ? sink : filters[pos].second->uid;
        const Uid fresh = engine.instantiate(r.type, tenant);
        engine.setState(fresh, ComponentState::Deployed);
        engine.setState(fresh, ComponentState::Started);
        const auto* added = model.component(fresh);
        engine.reroute(filterConnector(model, catalog, *model.component(prev)),
                       shop::filterProvided(model, catalog, *added)->uid);
        engine.connect(shop::filterRequired(model, catalog, *added)->uid,
                       shop::filterProvided(model, catalog, *model.component(next))->uid);
        engine.removeAnnotation(r.annotation);
        filters.insert(filters.begin() + static_cast<std::ptrdiff_t>(pos), {r.average, model.component(fresh)});
        outcome.strategiesApplied.push_back({"AS8", fresh, fmt::format("re-added filter with average {} ms", r.average)});
    }
}

}  // namespace mrubis::engines
