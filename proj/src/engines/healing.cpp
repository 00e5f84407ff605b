#include "mrubis/engines/healing.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"
#include "mrubis/shop/utility.hpp"

namespace mrubis::engines {

namespace {

using comparch::Component;
using comparch::ComponentState;
using comparch::ModelError;

double gainOf(const Architecture& model, const Thresholds& thresholds, Uid component) {
    const auto* c = model.component(component);
    if (!c || shop::failed(model, *c, thresholds)) return 0.0;
    const auto* type = model.componentType(c->type);
    return type->reliability * c->criticality;
}

void start(ModelHandle& h, Uid component) {
    auto state = h.model().component(component)->state;
    if (state == ComponentState::Unknown || state == ComponentState::Undeployed) {
        h.setState(component, ComponentState::Deployed);
        state = ComponentState::Deployed;
    }
    if (state == ComponentState::Deployed) h.setState(component, ComponentState::Started);
}

void redeploy(ModelHandle& h, Uid component) {
    auto state = h.model().component(component)->state;
    if (state == ComponentState::Unknown) h.setState(component, ComponentState::Deployed), state = ComponentState::Deployed;
    if (state == ComponentState::Started) h.setState(component, ComponentState::Deployed), state = ComponentState::Deployed;
    if (state == ComponentState::Deployed) h.setState(component, ComponentState::Undeployed);
    h.setState(component, ComponentState::Deployed);
    h.setState(component, ComponentState::Started);
}

WiringHints hintsFrom(const Architecture& model, const Component& c) {
    WiringHints hints;
    for (const auto& r : c.required) {
        if (auto p = model.connectedProvider(r.uid)) hints.providers.push_back(*p);
    }
    for (const auto& p : c.provided) {
        for (Uid k : p.connectors) hints.dependents.push_back(model.connector(k)->source);
    }
    return hints;
}

/// Instantiates, starts and wires a component of `type` into `tenant`.
Uid place(ModelHandle& h, Uid type, Uid tenant, const WiringHints* hints) {
    const auto& model = h.model();
    const Uid fresh = h.instantiate(type, tenant);
    h.setState(fresh, ComponentState::Deployed);
    h.setState(fresh, ComponentState::Started);

    const auto required = model.component(fresh)->required;
    std::set<Uid> used;
    for (const auto& r : required) {
        std::optional<Uid> target;
        if (hints) {
            for (Uid p : hints->providers) {
                const auto* prov = model.providedInterface(p);
                if (prov && prov->type == r.type && !used.count(p) && prov->component != fresh) {
                    target = p;
                    break;
                }
            }
        }
        if (!target) target = shop::resolveProvider(model, r.uid);
        if (!target) continue;
        used.insert(*target);
        h.connect(r.uid, *target);
    }

    const auto provided = model.component(fresh)->provided;
    auto providedOfType = [&](Uid interfaceType) -> std::optional<Uid> {
        for (const auto& p : provided) {
            if (p.type == interfaceType) return p.uid;
        }
        return std::nullopt;
    };
    if (hints) {
        for (Uid source : hints->dependents) {
            const auto* req = model.requiredInterface(source);
            if (!req || req->connector || req->component == fresh) continue;
            if (auto p = providedOfType(req->type)) h.connect(source, *p);
        }
        return fresh;
    }
    std::vector<std::pair<Uid, Uid>> pending;
    for (const Component* c : model.componentsOf(tenant)) {
        if (c->uid == fresh) continue;
        for (const auto& r : c->required) {
            if (r.connector || !providedOfType(r.type)) continue;
            auto target = shop::resolveProvider(model, r.uid);
            if (target && model.interfaceOwner(*target) == fresh) pending.emplace_back(r.uid, *target);
        }
    }
    for (const auto& [source, target] : pending) h.connect(source, target);
    return fresh;
}

}  // namespace

std::string_view strategyFor(IssueKind kind) {
    switch (kind) {
        case IssueKind::CF1: return "AS1";
        case IssueKind::CF2: return "AS2";
        case IssueKind::CF3: return "AS3";
        case IssueKind::CF4: return "AS4";
        case IssueKind::CF5: return "AS5";
        case IssueKind::PI1: return "AS6";
        case IssueKind::PI2: return "AS7";
        case IssueKind::PI3: return "AS8";
    }
    return "";
}

double strategyCost(std::string_view strategy) {
    static const std::map<std::string_view, double> costs{{"AS1", 1}, {"AS2", 2}, {"AS3", 5}, {"AS4", 8},
                                                          {"AS5", 1}, {"AS6", 2}, {"AS7", 3}, {"AS8", 3}};
    auto it = costs.find(strategy);
    return it == costs.end() ? 0.0 : it->second;
}

std::optional<Failure> componentFailure(const Architecture& model, const Thresholds& thresholds, Uid component,
                                        const HitCounter& hit) {
    const auto* c = model.component(component);
    if (!c) return std::nullopt;
    IssueKind kind;
    if (c->state == ComponentState::Unknown) {
        kind = IssueKind::CF1;
    } else if (model.exceptionCount(component) > static_cast<std::size_t>(thresholds.cf2ExceptionThreshold)) {
        kind = IssueKind::CF2;
    } else {
        return std::nullopt;
    }
    if (hit(component) >= thresholds.cf4RepeatCount) kind = IssueKind::CF4;
    return Failure{kind, c->tenant, component, 0, c->type};
}

std::vector<Failure> scanFailures(const Architecture& model, const ShopCatalog& catalog, const Thresholds& thresholds,
                                  const HitCounter& hit) {
    std::vector<Failure> out;
    for (const auto& t : model.tenants()) {
        const auto missing = shop::missingSlots(model, catalog, t.uid);
        for (std::size_t s : missing) out.push_back({IssueKind::CF3, t.uid, t.uid, s, catalog.primaryType(s)});
        const auto components = model.componentsOf(t.uid);
        for (const Component* c : components) {
            if (auto f = componentFailure(model, thresholds, c->uid, hit)) out.push_back(*f);
        }
        if (!missing.empty()) continue;
        for (const Component* c : components) {
            for (const auto& r : c->required) {
                if (!r.connector) out.push_back({IssueKind::CF5, t.uid, r.uid, 0, {}});
            }
        }
    }
    return out;
}

double utilityDrop(const Architecture& model, const ShopCatalog& catalog, const Thresholds& thresholds,
                   const Failure& failure) {
    switch (failure.kind) {
        case IssueKind::CF1:
        case IssueKind::CF2:
        case IssueKind::CF4: {
            const auto* c = model.component(failure.subject);
            return c ? shop::componentUtility(model, *c) : 0.0;
        }
        case IssueKind::CF3: {
            const auto* type = model.componentType(failure.type);
            std::size_t attachments = 0;
            double gain = 0.0;
            for (Uid required : type->requiredInterfaceTypes) {
                if (auto p = shop::resolveProvider(model, failure.tenant, required, std::nullopt)) {
                    ++attachments;
                    gain += gainOf(model, thresholds, *model.interfaceOwner(*p));
                }
            }
            const std::set<Uid> provided(type->providedInterfaceTypes.begin(), type->providedInterfaceTypes.end());
            for (const Component* c : model.componentsOf(failure.tenant)) {
                for (const auto& r : c->required) {
                    if (r.connector || !provided.count(r.type)) continue;
                    ++attachments;
                    gain += gainOf(model, thresholds, c->uid);
                }
            }
            (void)catalog;
            return gain + type->reliability * type->criticality * static_cast<double>(attachments);
        }
        case IssueKind::CF5: {
            const auto* req = model.requiredInterface(failure.subject);
            if (!req) return 0.0;
            double gain = gainOf(model, thresholds, req->component);
            if (auto p = shop::resolveProvider(model, failure.subject)) gain += gainOf(model, thresholds, *model.interfaceOwner(*p));
            return gain;
        }
        default:
            return 0.0;
    }
}

AppliedStrategy repair(ModelHandle& engine, const ShopCatalog& catalog, const Failure& failure,
                       const WiringHints* hints) {
    const auto& model = engine.model();
    AppliedStrategy applied{std::string(strategyFor(failure.kind)), failure.subject, {}};
    switch (failure.kind) {
        case IssueKind::CF1:
            start(engine, failure.subject);
            applied.detail = "restarted";
            break;
        case IssueKind::CF2:
            redeploy(engine, failure.subject);
            applied.detail = "redeployed";
            break;
        case IssueKind::CF3: {
            const Uid fresh = place(engine, failure.type, failure.tenant, hints);
            applied.detail = fmt::format("added component {} of type '{}'", fresh.value,
                                         model.componentType(failure.type)->name);
            break;
        }
        case IssueKind::CF4: {
            const auto* old = model.component(failure.subject);
            const Uid type = catalog.alternativeOf(old->type);
            const Uid tenant = old->tenant;
            const WiringHints own = hintsFrom(model, *old);
            engine.removeComponent(failure.subject);
            const Uid fresh = place(engine, type, tenant, &own);
            applied.detail = fmt::format("replaced by component {} of type '{}'", fresh.value,
                                         model.componentType(type)->name);
            break;
        }
        case IssueKind::CF5: {
            std::optional<Uid> target;
            if (hints) {
                const auto* req = model.requiredInterface(failure.subject);
                for (Uid p : hints->providers) {
                    const auto* prov = model.providedInterface(p);
                    if (req && prov && prov->type == req->type) target = p;
                }
            }
            if (!target) target = shop::resolveProvider(model, failure.subject);
            if (!target) throw ModelError(fmt::format("no provider for required interface {}", failure.subject.value));
            engine.connect(failure.subject, *target);
            applied.detail = fmt::format("connected to {}", target->value);
            break;
        }
        default:
            throw ModelError("not a critical failure");
    }
    return applied;
}

// ---- monolithic -------------------------------------------------------------

MonolithicEngine::MonolithicEngine(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds)
    : catalog_(std::move(catalog)), thresholds_(thresholds) {}

sim::EngineOutcome MonolithicEngine::adapt(ModelHandle& engine, std::span<const comparch::ChangeEvent>,
                                           std::stop_token stop) {
    sim::EngineOutcome outcome;
    auto hit = [this](Uid c) { return ++hits_[c]; };
    for (const auto& f : scanFailures(engine.model(), *catalog_, thresholds_, hit)) {
        if (stop.stop_requested()) break;
        if (f.kind == IssueKind::CF4) hits_.erase(f.subject);
        outcome.strategiesApplied.push_back(repair(engine, *catalog_, f));
    }
    return outcome;
}

// ---- MAPE -------------------------------------------------------------------

MapeEngine::MapeEngine(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds)
    : catalog_(std::move(catalog)), thresholds_(thresholds) {}

sim::EngineOutcome MapeEngine::adapt(ModelHandle& engine, std::span<const comparch::ChangeEvent>,
                                     std::stop_token stop) {
    using comparch::AdaptationStrategy;
    using comparch::Annotation;
    using comparch::WorkingData;
    const auto& model = engine.model();
    sim::EngineOutcome outcome;

    // monitor: drop the findings of the previous run
    std::vector<Uid> strategies;
    std::vector<Uid> issues;
    for (const auto& [uid, a] : model.annotations()) {
        if (std::holds_alternative<AdaptationStrategy>(a.body)) strategies.push_back(uid);
        if (std::holds_alternative<comparch::Issue>(a.body)) issues.push_back(uid);
    }
    for (Uid uid : strategies) engine.removeAnnotation(uid);
    for (Uid uid : issues) engine.removeAnnotation(uid);

    // analyze
    auto hit = [&](Uid component) {
        int count = 1;
        std::optional<Uid> previous;
        for (const auto& [uid, a] : model.annotations()) {
            const auto* w = std::get_if<WorkingData>(&a.body);
            if (w && a.name == "failure-count" && !w->concernedElements.empty() && w->concernedElements.front() == component) {
                previous = uid;
                count = std::stoi(w->value) + 1;
            }
        }
        if (previous) engine.removeAnnotation(*previous);
        engine.annotate({{}, "failure-count", "working-data", "CF1/CF2 hits of a component",
                         WorkingData{std::to_string(count), "hits", {component}}});
        return count;
    };
    const auto failures = scanFailures(model, *catalog_, thresholds_, hit);

    // plan
    std::vector<std::pair<Uid, Failure>> plan;
    for (const auto& f : failures) {
        const double drop = utilityDrop(model, *catalog_, thresholds_, f);
        const Uid issue = engine.annotate({{}, std::string(sim::toString(f.kind)), "issue",
                                           std::string(sim::describe(f.kind)), comparch::Issue{drop, {f.subject}}});
        const auto strategy = std::string(strategyFor(f.kind));
        const Uid planned = engine.annotate({{}, strategy, "adaptation-strategy", "",
                                             AdaptationStrategy{drop, strategyCost(strategy), issue, {f.subject}}});
        plan.emplace_back(planned, f);
    }

    // execute
    for (const auto& [planned, f] : plan) {
        if (stop.stop_requested()) break;
        if (f.kind == IssueKind::CF4) {
            for (const auto& [uid, a] : model.annotations()) {
                const auto* w = std::get_if<WorkingData>(&a.body);
                if (w && a.name == "failure-count" && !w->concernedElements.empty() && w->concernedElements.front() == f.subject) {
                    engine.removeAnnotation(uid);
                    break;
                }
            }
        }
        outcome.strategiesApplied.push_back(repair(engine, *catalog_, f));
    }
    return outcome;
}

// ---- event-driven -----------------------------------------------------------

EventDrivenHealingEngine::EventDrivenHealingEngine(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds)
    : catalog_(std::move(catalog)), thresholds_(thresholds) {}

sim::EngineOutcome EventDrivenHealingEngine::adapt(ModelHandle& engine, std::span<const comparch::ChangeEvent> events,
                                                   std::stop_token stop) {
    using comparch::ChangeEventKind;
    const auto& model = engine.model();
    sim::EngineOutcome outcome;

    std::map<Uid, WiringHints> removed;
    for (const auto& e : events) {
        if (e.kind == ChangeEventKind::ComponentRemoved) removed[e.subject];
    }
    for (const auto& e : events) {
        if (e.kind != ChangeEventKind::ConnectorRemoved) continue;
        auto source = e.getUid("sourceComponent");
        auto target = e.getUid("targetComponent");
        if (source && removed.count(*source)) {
            if (auto p = e.getUid("target")) removed[*source].providers.push_back(*p);
        }
        if (target && removed.count(*target)) {
            if (auto r = e.getUid("source")) removed[*target].dependents.push_back(*r);
        }
    }

    auto hit = [this](Uid c) { return ++hits_[c]; };
    std::set<Uid> handled;
    for (const auto& e : events) {
        if (stop.stop_requested()) break;
        switch (e.kind) {
            case ChangeEventKind::ComponentLifecycleChanged:
            case ChangeEventKind::ExceptionOccurred: {
                const Uid component = e.kind == ChangeEventKind::ExceptionOccurred
                                          ? e.getUid("component").value_or(Uid{})
                                          : e.subject;
                if (e.kind == ChangeEventKind::ComponentLifecycleChanged && e.get("new") != "UNKNOWN") break;
                if (handled.count(component)) break;
                auto f = componentFailure(model, thresholds_, component, hit);
                if (!f) break;
                handled.insert(component);
                if (f->kind == IssueKind::CF4) hits_.erase(component);
                outcome.strategiesApplied.push_back(repair(engine, *catalog_, *f));
                break;
            }
            case ChangeEventKind::ComponentRemoved: {
                auto tenant = e.getUid("tenant");
                auto type = e.getUid("type");
                if (!tenant || !type) break;
                auto slot = catalog_->slotOf(*type);
                if (!slot) break;
                const auto missing = shop::missingSlots(model, *catalog_, *tenant);
                if (std::find(missing.begin(), missing.end(), *slot) == missing.end()) break;
                Failure f{IssueKind::CF3, *tenant, *tenant, *slot, *type};
                outcome.strategiesApplied.push_back(repair(engine, *catalog_, f, &removed[e.subject]));
                break;
            }
            case ChangeEventKind::ConnectorRemoved: {
                auto sourceComponent = e.getUid("sourceComponent");
                auto targetComponent = e.getUid("targetComponent");
                if ((sourceComponent && removed.count(*sourceComponent)) ||
                    (targetComponent && removed.count(*targetComponent))) {
                    break;
                }
                auto source = e.getUid("source");
                if (!source) break;
                const auto* req = model.requiredInterface(*source);
                if (!req || req->connector) break;
                WiringHints hints;
                if (auto p = e.getUid("target")) hints.providers.push_back(*p);
                Failure f{IssueKind::CF5, model.component(req->component)->tenant, *source, 0, {}};
                outcome.strategiesApplied.push_back(repair(engine, *catalog_, f, &hints));
                break;
            }
            default:
                break;
        }
    }
    return outcome;
}

}  // namespace mrubis::engines
