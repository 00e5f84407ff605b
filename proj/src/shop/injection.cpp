#include "mrubis/shop/injection.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"
#include "mrubis/shop/generator.hpp"

namespace mrubis::shop {

namespace {

using comparch::ComponentState;
using comparch::ElementKind;
using comparch::ModelError;
using comparch::StatsValues;

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

void expectKind(const Architecture& model, Uid target, ElementKind kind, IssueKind issue) {
    auto found = model.findByUid(target);
    if (found != kind) {
        throw ModelError(fmt::format("{} expects a {} target, {} is {}", sim::toString(issue), comparch::toString(kind),
                                     target.value, found ? comparch::toString(*found) : "unknown"));
    }
}

StatsValues withAverage(const StatsValues& old, double average) {
    StatsValues v = old;
    if (v.invocationCount == 0) v.invocationCount = 1;
    v.totalTime = average * static_cast<double>(v.invocationCount);
    v.minTime = average * 0.5;
    v.maxTime = average * 2.0;
    return v;
}

StatsValues scaled(const StatsValues& old, double factor) {
    StatsValues v = old;
    v.minTime *= factor;
    v.maxTime *= factor;
    v.totalTime *= factor;
    return v;
}

struct MeasuredFilter {
    const Component* component;
    std::size_t slot;
    StatsValues values;
};

std::vector<MeasuredFilter> measuredFilters(const Architecture& model, const ShopCatalog& catalog, Uid tenant) {
    std::vector<MeasuredFilter> out;
    for (const Component* f : tracePipe(model, catalog, tenant).filters) {
        const auto* p = filterProvided(model, catalog, *f);
        for (const auto& s : p->stats) {
            if (s.method == catalog.filterMethod() && s.values.average()) {
                out.push_back({f, *catalog.slotOf(f->type), s.values});
            }
        }
    }
    return out;
}

}  // namespace

int InjectionHistory::hits(Uid component) const {
    auto it = entries_.find(component);
    return it == entries_.end() ? 0 : it->second.first;
}

std::optional<IssueKind> InjectionHistory::lastKind(Uid component) const {
    auto it = entries_.find(component);
    if (it == entries_.end()) return std::nullopt;
    return it->second.second;
}

void InjectionHistory::record(Uid component, IssueKind kind) {
    auto& e = entries_[component];
    ++e.first;
    e.second = kind;
}

void PipeWorld::observe(const Architecture& model, const ShopCatalog& catalog) {
    for (const auto& t : model.tenants()) {
        for (const auto& f : measuredFilters(model, catalog, t.uid)) stats_.try_emplace({t.uid, f.slot}, f.values);
    }
}

std::optional<StatsValues> PipeWorld::stats(Uid tenant, std::size_t slot) const {
    auto it = stats_.find({tenant, slot});
    if (it == stats_.end()) return std::nullopt;
    return it->second;
}

void PipeWorld::set(Uid tenant, std::size_t slot, const StatsValues& values) { stats_[{tenant, slot}] = values; }

// ---- critical failures ------------------------------------------------------

CriticalFailureInjector::CriticalFailureInjector(IssueKind kind, Thresholds thresholds,
                                                 std::shared_ptr<InjectionHistory> history)
    : kind_(kind), thresholds_(thresholds), history_(std::move(history)) {
    if (kind_ > IssueKind::CF5) throw std::invalid_argument("not a critical failure");
    if (!history_) history_ = std::make_shared<InjectionHistory>();
}

void CriticalFailureInjector::crash(comparch::ModelHandle& simulator, Uid component) {
    simulator.setState(component, ComponentState::Unknown);
    history_->record(component, IssueKind::CF1);
}

void CriticalFailureInjector::raiseExceptions(comparch::ModelHandle& simulator, Uid component, Rng& rng) {
    const auto* c = simulator.model().component(component);
    if (c->provided.empty()) throw ModelError(fmt::format("component {} provides no interface", component.value));
    const auto& provided = pick(c->provided, rng);
    const auto& methods = simulator.model().interfaceType(provided.type)->methods;
    const auto method = pick(methods, rng).uid;
    for (int i = 0; i <= thresholds_.cf2ExceptionThreshold; ++i) {
        simulator.recordException(provided.uid, method, "ServiceException", fmt::format("injected failure {}", i + 1),
                                  "at de.mdelab.mrubis.Service.invoke");
    }
    history_->record(component, IssueKind::CF2);
}

void CriticalFailureInjector::inject(comparch::ModelHandle& simulator, Uid target, Rng& rng) {
    const auto& model = simulator.model();
    switch (kind_) {
        case IssueKind::CF1:
            expectKind(model, target, ElementKind::Component, kind_);
            crash(simulator, target);
            return;
        case IssueKind::CF2:
            expectKind(model, target, ElementKind::Component, kind_);
            raiseExceptions(simulator, target, rng);
            return;
        case IssueKind::CF3:
            expectKind(model, target, ElementKind::Component, kind_);
            simulator.removeComponent(target);
            history_->forget(target);
            return;
        case IssueKind::CF4:
            expectKind(model, target, ElementKind::Component, kind_);
            if (history_->lastKind(target).value_or(IssueKind::CF1) == IssueKind::CF2) {
                raiseExceptions(simulator, target, rng);
            } else {
                crash(simulator, target);
            }
            return;
        case IssueKind::CF5:
            expectKind(model, target, ElementKind::Connector, kind_);
            simulator.disconnect(target);
            return;
        default:
            break;
    }
    throw ModelError("unsupported issue kind");
}

// ---- performance issues -----------------------------------------------------

PerformanceIssueInjector::PerformanceIssueInjector(IssueKind kind, std::shared_ptr<const ShopCatalog> catalog,
                                                   Thresholds thresholds, std::shared_ptr<PipeWorld> world)
    : kind_(kind), catalog_(std::move(catalog)), thresholds_(thresholds), world_(std::move(world)) {
    if (kind_ < IssueKind::PI1) throw std::invalid_argument("not a performance issue");
    if (!catalog_) throw std::invalid_argument("catalog required");
    if (!world_) world_ = std::make_shared<PipeWorld>();
}

void PerformanceIssueInjector::inject(comparch::ModelHandle& simulator, Uid target, Rng& rng) {
    const auto& model = simulator.model();
    expectKind(model, target, ElementKind::Tenant, kind_);
    world_->observe(model, *catalog_);
    auto filters = measuredFilters(model, *catalog_, target);

    auto apply = [&](const MeasuredFilter& f, const StatsValues& values) {
        const auto* p = filterProvided(model, *catalog_, *f.component);
        simulator.updatePerformanceStats(p->uid, catalog_->filterMethod(), values);
        world_->set(target, f.slot, values);
    };
    auto current = [&] { return responseTime(thresholds_.baseQueryTimeMs, pipeAverages(model, *catalog_, tracePipe(model, *catalog_, target))); };

    switch (kind_) {
        case IssueKind::PI1: {
            if (filters.size() < 2) throw ModelError("PI1 needs at least two measured filters in the pipe");
            std::vector<double> averages;
            for (const auto& f : filters) averages.push_back(*f.values.average());
            const std::size_t i = std::uniform_int_distribution<std::size_t>(0, filters.size() - 1)(rng);
            const double average = i + 1 < filters.size() ? *std::max_element(averages.begin(), averages.end()) * 1.5
                                                          : *std::min_element(averages.begin(), averages.end()) / 2.0;
            apply(filters[i], withAverage(filters[i].values, average));
            break;
        }
        case IssueKind::PI2: {
            if (filters.empty()) throw ModelError("PI2 needs a measured filter in the pipe");
            double sum = current() - thresholds_.baseQueryTimeMs;
            double factor = std::max(1.2, 1.2 * (thresholds_.responseTimeUpperMs - thresholds_.baseQueryTimeMs) / sum);
            for (int attempt = 0; attempt < 64 && !(current() > thresholds_.responseTimeUpperMs); ++attempt) {
                for (auto& f : measuredFilters(model, *catalog_, target)) apply(f, scaled(f.values, factor));
                factor = 1.1;
            }
            break;
        }
        case IssueKind::PI3: {
            if (filters.empty()) throw ModelError("PI3 needs a measured filter in the pipe");
            double sum = current() - thresholds_.baseQueryTimeMs;
            double factor = std::min(0.9, 0.5 * (thresholds_.responseTimeLowerMs - thresholds_.baseQueryTimeMs) / sum);
            for (int attempt = 0; attempt < 64 && !(current() < thresholds_.responseTimeLowerMs); ++attempt) {
                for (auto& f : measuredFilters(model, *catalog_, target)) apply(f, scaled(f.values, factor));
                factor = 0.5;
            }
            break;
        }
        default:
            throw ModelError("unsupported issue kind");
    }
    refreshResponseTime(simulator, *catalog_, target, thresholds_);
}

// ---- scenarios --------------------------------------------------------------

SelfHealingScenario::SelfHealingScenario(Thresholds thresholds, std::shared_ptr<InjectionHistory> history)
    : thresholds_(thresholds), history_(std::move(history)) {
    if (!history_) throw std::invalid_argument("history required");
}

std::vector<IssueKind> SelfHealingScenario::producibleIssues() const {
    return {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3, IssueKind::CF4, IssueKind::CF5};
}

std::vector<sim::Injection> SelfHealingScenario::nextInjections(int, const Architecture& model, Rng& rng) {
    std::vector<Uid> fresh;
    std::vector<Uid> repeated;
    std::vector<Uid> all;
    for (const Component* c : model.components()) {
        all.push_back(c->uid);
        if (c->state != ComponentState::Started) continue;
        (history_->hits(c->uid) >= thresholds_.cf4RepeatCount - 1 ? repeated : fresh).push_back(c->uid);
    }
    std::vector<Uid> links;
    for (const auto* k : model.connectors()) links.push_back(k->uid);

    std::vector<std::pair<IssueKind, const std::vector<Uid>*>> options;
    if (!fresh.empty()) options.emplace_back(IssueKind::CF1, &fresh);
    if (!fresh.empty()) options.emplace_back(IssueKind::CF2, &fresh);
    if (!all.empty()) options.emplace_back(IssueKind::CF3, &all);
    if (!repeated.empty()) options.emplace_back(IssueKind::CF4, &repeated);
    if (!links.empty()) options.emplace_back(IssueKind::CF5, &links);
    if (options.empty()) return {};
    const auto& [kind, candidates] = pick(options, rng);
    return {{kind, pick(*candidates, rng)}};
}

SelfOptimizationScenario::SelfOptimizationScenario(std::shared_ptr<const ShopCatalog> catalog)
    : catalog_(std::move(catalog)) {
    if (!catalog_) throw std::invalid_argument("catalog required");
}

std::vector<IssueKind> SelfOptimizationScenario::producibleIssues() const {
    return {IssueKind::PI1, IssueKind::PI2, IssueKind::PI3};
}

std::vector<sim::Injection> SelfOptimizationScenario::nextInjections(int, const Architecture& model, Rng& rng) {
    if (model.tenants().empty()) return {};
    const Uid shop = pick(model.tenants(), rng).uid;
    const auto measured = measuredFilters(model, *catalog_, shop).size();
    const auto missing = missingSlots(model, *catalog_, shop);
    const bool skipped = std::any_of(missing.begin(), missing.end(),
                                     [&](std::size_t s) { return catalog_->slot(s).filter; });
    std::vector<IssueKind> options;
    if (measured >= 2) options.push_back(IssueKind::PI1);
    if (measured >= 1) options.push_back(IssueKind::PI2);
    if (skipped && measured >= 1) options.push_back(IssueKind::PI3);
    if (options.empty()) return {};
    return {{pick(options, rng), shop}};
}

}  // namespace mrubis::shop
