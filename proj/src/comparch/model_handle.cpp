#include "mrubis/comparch/model_handle.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"

namespace mrubis::comparch {

std::string_view toString(Role role) { return role == Role::Simulator ? "SIMULATOR" : "ENGINE"; }

bool transitionAllowed(Role role, ComponentState from, ComponentState to) {
    if (from == to) return false;
    if (to == ComponentState::Unknown) return role == Role::Simulator;
    switch (from) {
        case ComponentState::Undeployed: return to == ComponentState::Deployed;
        case ComponentState::Deployed: return to == ComponentState::Undeployed || to == ComponentState::Started;
        case ComponentState::Started: return to == ComponentState::Deployed;
        case ComponentState::Unknown: return to == ComponentState::Deployed;
    }
    return false;
}

void ModelHandle::requireSimulator(std::string_view operation) const {
    if (role_ != Role::Simulator) {
        throw PermissionError(fmt::format("{} is reserved to the simulator; runtime-level elements are observations only",
                                          operation));
    }
}

namespace {

const Component& existingComponent(const Architecture& model, Uid uid) {
    const Component* c = model.component(uid);
    if (!c) throw ModelError(fmt::format("unknown component {}", uid.value));
    return *c;
}

bool methodOf(const Architecture& model, Uid interfaceType, Uid method) {
    const InterfaceType* type = model.interfaceType(interfaceType);
    return type && std::any_of(type->methods.begin(), type->methods.end(),
                               [&](const MethodSpecification& m) { return m.uid == method; });
}

void requireCompatible(const Architecture& model, const RequiredInterface& req, const ProvidedInterface& prov) {
    const InterfaceType* reqType = model.interfaceType(req.type);
    const InterfaceType* provType = model.interfaceType(prov.type);
    if (!reqType || !provType || reqType->fqName != provType->fqName) {
        throw ModelError(fmt::format("interface type mismatch: '{}' cannot be wired to '{}'",
                                     reqType ? reqType->fqName : "?", provType ? provType->fqName : "?"));
    }
    const Component* source = model.component(req.component);
    const Component* target = model.component(prov.component);
    if (source->tenant != target->tenant) {
        throw ModelError(fmt::format("connector would cross tenants ({} -> {})", source->tenant.value,
                                     target->tenant.value));
    }
}

}  // namespace

Uid ModelHandle::instantiate(Uid componentType, Uid tenant) {
    if (!model_->componentType(componentType)) {
        throw ModelError(fmt::format("unknown component type {}", componentType.value));
    }
    if (!model_->tenant(tenant)) throw ModelError(fmt::format("unknown tenant {}", tenant.value));
    return model_->doInstantiate(componentType, tenant);
}

void ModelHandle::setState(Uid component, ComponentState state) {
    const Component& c = existingComponent(*model_, component);
    if (state == ComponentState::Unknown && role_ == Role::Engine) {
        throw PermissionError("UNKNOWN is an observed state and cannot be set by an adaptation engine");
    }
    if (!transitionAllowed(role_, c.state, state)) {
        throw ModelError(fmt::format("illegal lifecycle transition {} -> {} for component {}", toString(c.state),
                                     toString(state), component.value));
    }
    model_->doSetState(component, state);
}

void ModelHandle::removeComponent(Uid component) {
    existingComponent(*model_, component);
    model_->doRemoveComponent(component);
}

Uid ModelHandle::connect(Uid requiredInterface, Uid providedInterface) {
    const RequiredInterface* req = model_->requiredInterface(requiredInterface);
    if (!req) throw ModelError(fmt::format("unknown required interface {}", requiredInterface.value));
    const ProvidedInterface* prov = model_->providedInterface(providedInterface);
    if (!prov) throw ModelError(fmt::format("unknown provided interface {}", providedInterface.value));
    if (req->connector) {
        throw ModelError(fmt::format("required interface {} is already connected", requiredInterface.value));
    }
    requireCompatible(*model_, *req, *prov);
    return model_->doConnect(requiredInterface, providedInterface);
}

void ModelHandle::disconnect(Uid connector) {
    if (!model_->connector(connector)) throw ModelError(fmt::format("unknown connector {}", connector.value));
    model_->doDisconnect(connector);
}

void ModelHandle::reroute(Uid connector, Uid providedInterface) {
    const Connector* conn = model_->connector(connector);
    if (!conn) throw ModelError(fmt::format("unknown connector {}", connector.value));
    const ProvidedInterface* prov = model_->providedInterface(providedInterface);
    if (!prov) throw ModelError(fmt::format("unknown provided interface {}", providedInterface.value));
    requireCompatible(*model_, *model_->requiredInterface(conn->source), *prov);
    model_->doReroute(connector, providedInterface);
}

void ModelHandle::setParameter(Uid parameter, std::string value) {
    const Parameter* param = model_->parameter(parameter);
    if (!param) throw ModelError(fmt::format("unknown parameter {}", parameter.value));
    const ParameterType* type = model_->parameterType(param->type);
    if (!valueParses(type->dataType, value)) {
        throw ModelError(fmt::format("'{}' is not a valid {} for parameter '{}'", value, toString(type->dataType),
                                     type->name));
    }
    model_->doSetParameter(parameter, std::move(value));
}

Uid ModelHandle::recordException(Uid providedInterface, Uid method, std::string type, std::string message,
                                 std::string stackTrace) {
    requireSimulator("recording exceptions");
    const ProvidedInterface* prov = model_->providedInterface(providedInterface);
    if (!prov) throw ModelError(fmt::format("unknown provided interface {}", providedInterface.value));
    if (!methodOf(*model_, prov->type, method)) {
        throw ModelError(fmt::format("method {} is not part of the interface", method.value));
    }
    return model_->doRecordException(providedInterface, method, std::move(type), std::move(message),
                                     std::move(stackTrace));
}

Uid ModelHandle::updatePerformanceStats(Uid providedInterface, Uid method, const StatsValues& values) {
    requireSimulator("updating performance stats");
    const ProvidedInterface* prov = model_->providedInterface(providedInterface);
    if (!prov) throw ModelError(fmt::format("unknown provided interface {}", providedInterface.value));
    if (!methodOf(*model_, prov->type, method)) {
        throw ModelError(fmt::format("method {} is not part of the interface", method.value));
    }
    if (values.minTime < 0.0 || values.totalTime < 0.0 || values.minTime > values.maxTime) {
        throw ModelError("performance stats require 0 <= minTime <= maxTime and totalTime >= 0");
    }
    return model_->doUpdateStats(providedInterface, method, values);
}

Uid ModelHandle::setMonitoredProperty(Uid owner, std::string name, std::string description, DataType dataType,
                                      std::string unit, std::string value) {
    requireSimulator("updating monitored properties");
    if (!model_->findByUid(owner)) throw ModelError(fmt::format("unknown element {}", owner.value));
    if (!valueParses(dataType, value)) {
        throw ModelError(fmt::format("'{}' is not a valid {} for property '{}'", value, toString(dataType), name));
    }
    return model_->doSetProperty(owner, std::move(name), std::move(description), dataType, std::move(unit),
                                 std::move(value));
}

Uid ModelHandle::annotate(Annotation annotation) {
    if (const auto* strategy = std::get_if<AdaptationStrategy>(&annotation.body)) {
        const Annotation* issue = model_->annotation(strategy->assignedIssue);
        if (!issue || !std::holds_alternative<Issue>(issue->body)) {
            throw ModelError("an adaptation strategy must be assigned to an existing issue");
        }
    }
    return model_->doAnnotate(std::move(annotation));
}

void ModelHandle::removeAnnotation(Uid annotation) { model_->doRemoveAnnotation(annotation); }

void ModelHandle::clearAnnotations() {
    std::vector<Uid> uids;
    for (const auto& [uid, a] : model_->annotations()) uids.push_back(uid);
    for (Uid uid : uids) model_->doRemoveAnnotation(uid);
}

}  // namespace mrubis::comparch
