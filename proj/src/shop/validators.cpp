#include "mrubis/shop/validators.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "mrubis/shop/generator.hpp"

namespace mrubis::shop {

namespace {

using comparch::ComponentState;

Violation violation(std::string_view validator, std::string code, Uid subject, std::string message) {
    return {std::string(validator), std::move(code), subject, std::move(message)};
}

}  // namespace

std::vector<Violation> ArchitectureValidator::validate(comparch::ModelHandle& simulator) {
    const auto& model = simulator.model();
    std::vector<Violation> out;
    std::set<Uid> seen;
    auto unique = [&](Uid uid, std::string_view what) {
        if (!seen.insert(uid).second) {
            out.push_back(violation(name(), "duplicate-uid", uid, fmt::format("uid {} reused by a {}", uid.value, what)));
        }
    };
    for (const auto& t : model.tenants()) {
        unique(t.uid, "tenant");
        for (const Component* c : model.componentsOf(t.uid)) {
            unique(c->uid, "component");
            if (c->state == ComponentState::Unknown) {
                out.push_back(violation(name(), "component-unknown", c->uid,
                                        fmt::format("component {} is in state UNKNOWN", c->uid.value)));
            }
            for (const auto& p : c->parameters) unique(p.uid, "parameter");
            for (const auto& p : c->provided) unique(p.uid, "provided interface");
            for (const auto& r : c->required) {
                unique(r.uid, "required interface");
                if (!r.connector) {
                    out.push_back(violation(name(), "required-unconnected", c->uid,
                                            fmt::format("required interface {} ({}) of component {} is unconnected",
                                                        r.uid.value, model.interfaceType(r.type)->fqName,
                                                        c->uid.value)));
                }
            }
        }
    }
    for (const auto* k : model.connectors()) {
        unique(k->uid, "connector");
        const auto* source = model.requiredInterface(k->source);
        const auto* target = model.providedInterface(k->target);
        if (!source || !target) {
            out.push_back(violation(name(), "dangling-connector", k->uid, "connector endpoint missing"));
            continue;
        }
        if (model.tenantOf(source->component) != model.tenantOf(target->component)) {
            out.push_back(violation(name(), "cross-tenant-connector", k->uid,
                                    fmt::format("connector {} crosses tenants", k->uid.value)));
        }
        if (model.interfaceType(source->type)->fqName != model.interfaceType(target->type)->fqName) {
            out.push_back(violation(name(), "incompatible-connector", k->uid,
                                    fmt::format("connector {} joins different interface types", k->uid.value)));
        }
    }
    return out;
}

SelfHealingValidator::SelfHealingValidator(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds)
    : catalog_(std::move(catalog)), thresholds_(thresholds) {
    if (!catalog_) throw std::invalid_argument("catalog required");
}

std::vector<Violation> SelfHealingValidator::validate(comparch::ModelHandle& simulator) {
    const auto& model = simulator.model();
    std::vector<Violation> out;
    for (const auto& t : model.tenants()) {
        for (const Component* c : model.componentsOf(t.uid)) {
            const auto n = model.exceptionCount(c->uid);
            if (n > static_cast<std::size_t>(thresholds_.cf2ExceptionThreshold)) {
                out.push_back(violation(name(), "exceptions-over-threshold", c->uid,
                                        fmt::format("component {} raised {} exceptions (threshold {})", c->uid.value,
                                                    n, thresholds_.cf2ExceptionThreshold)));
            }
        }
        const auto count = t.components.size();
        if (count != catalog_->slotCount()) {
            out.push_back(violation(name(), "component-count", t.uid,
                                    fmt::format("{} has {} components, expected {}", t.name, count,
                                                catalog_->slotCount())));
        }
        for (std::size_t s : missingSlots(model, *catalog_, t.uid)) {
            out.push_back(violation(name(), "missing-component", t.uid,
                                    fmt::format("{} lacks a '{}'", t.name, catalog_->slot(s).name)));
        }
    }
    return out;
}

SelfOptimizationValidator::SelfOptimizationValidator(std::shared_ptr<const ShopCatalog> catalog, Thresholds thresholds,
                                                     std::shared_ptr<PipeWorld> world)
    : catalog_(std::move(catalog)), thresholds_(thresholds), world_(std::move(world)) {
    if (!catalog_) throw std::invalid_argument("catalog required");
    if (!world_) world_ = std::make_shared<PipeWorld>();
}

std::vector<Violation> SelfOptimizationValidator::validate(comparch::ModelHandle& simulator) {
    const auto& model = simulator.model();
    std::vector<Violation> out;
    world_->observe(model, *catalog_);
    for (const auto& t : model.tenants()) {
        auto pipe = tracePipe(model, *catalog_, t.uid);
        for (const Component* f : pipe.filters) {
            if (filterAverage(model, *catalog_, *f)) continue;
            auto known = world_->stats(t.uid, *catalog_->slotOf(f->type));
            if (known) simulator.updatePerformanceStats(filterProvided(model, *catalog_, *f)->uid, catalog_->filterMethod(), *known);
        }
        pipe = tracePipe(model, *catalog_, t.uid);
        refreshResponseTime(simulator, *catalog_, t.uid, thresholds_);

        if (!pipe.intact) {
            out.push_back(violation(name(), "pipe-broken", t.uid, fmt::format("{}: {}", t.name, pipe.problem)));
        }
        std::vector<const Component*> measured;
        std::vector<double> averages;
        for (const Component* f : pipe.filters) {
            if (auto avg = filterAverage(model, *catalog_, *f)) {
                measured.push_back(f);
                averages.push_back(*avg);
            }
        }
        for (std::size_t i : misplacedPositions(averages)) {
            out.push_back(violation(name(), "pipe-misordered", measured[i]->uid,
                                    fmt::format("{}: filter {} (average {} ms) is out of order", t.name,
                                                measured[i]->uid.value, averages[i])));
        }
        const double response = responseTime(thresholds_.baseQueryTimeMs, averages);
        if (response > thresholds_.responseTimeUpperMs) {
            out.push_back(violation(name(), "response-time-above-upper", t.uid,
                                    fmt::format("{}: response time {} ms above {} ms", t.name, response,
                                                thresholds_.responseTimeUpperMs)));
        } else if (response < thresholds_.responseTimeLowerMs) {
            for (std::size_t s : missingSlots(model, *catalog_, t.uid)) {
                if (!catalog_->slot(s).filter) continue;
                auto known = world_->stats(t.uid, s);
                if (!known || !known->average()) continue;
                if (projectedWithInsert(thresholds_.baseQueryTimeMs, averages, *known->average()) <=
                    thresholds_.responseTimeUpperMs) {
                    out.push_back(violation(name(), "response-time-below-lower", t.uid,
                                            fmt::format("{}: response time {} ms below {} ms while '{}' could be re-added",
                                                        t.name, response, thresholds_.responseTimeLowerMs,
                                                        catalog_->slot(s).name)));
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace mrubis::shop
