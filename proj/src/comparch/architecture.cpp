#include "mrubis/comparch/architecture.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mrubis/comparch/errors.hpp"

namespace mrubis::comparch {

namespace {

std::string str(Uid uid) { return std::to_string(uid.value); }

void insertSorted(std::vector<Uid>& uids, Uid uid) {
    uids.insert(std::lower_bound(uids.begin(), uids.end(), uid), uid);
}

}  // namespace

Architecture::Architecture(std::string name) : name_(std::move(name)) {}

Uid Architecture::allocate(ElementKind kind) {
    Uid uid = kind == ElementKind::Annotation ? Uid{nextAnnotationUid_++} : Uid{nextUid_++};
    registerUid(uid, kind);
    return uid;
}

void Architecture::registerUid(Uid uid, ElementKind kind) {
    if (!uid.valid()) throw ModelError("uid 0 is reserved");
    auto [it, inserted] = registry_.emplace(uid, kind);
    if (!inserted) throw ModelError(fmt::format("duplicate uid {}", uid.value));
}

// ---- construction -----------------------------------------------------------

Uid Architecture::addInterfaceType(std::string fqName, const std::vector<std::string>& methodSignatures,
                                   double criticality) {
    if (sealed_) throw ModelError("type level is immutable after construction");
    if (interfaceTypeByName(fqName)) throw ModelError(fmt::format("duplicate interface type '{}'", fqName));
    if (criticality < 0.0) throw ModelError("criticality must be non-negative");
    InterfaceType type;
    type.uid = allocate(ElementKind::InterfaceType);
    type.criticality = criticality;
    type.fqName = std::move(fqName);
    for (const auto& signature : methodSignatures) {
        type.methods.push_back({allocate(ElementKind::MethodSpecification), signature});
    }
    interfaceTypes_.push_back(std::move(type));
    return interfaceTypes_.back().uid;
}

Uid Architecture::addComponentType(const ComponentTypeSpec& spec) {
    if (sealed_) throw ModelError("type level is immutable after construction");
    if (componentTypeByName(spec.name)) throw ModelError(fmt::format("duplicate component type '{}'", spec.name));
    if (!(spec.reliability >= 0.0 && spec.reliability <= 1.0)) {
        throw ModelError(fmt::format("reliability of '{}' outside [0,1]", spec.name));
    }
    if (spec.criticality < 0.0) throw ModelError("criticality must be non-negative");
    for (Uid it : spec.requiredInterfaceTypes) {
        if (!interfaceType(it)) throw ModelError(fmt::format("unknown required interface type {}", it.value));
    }
    for (Uid it : spec.providedInterfaceTypes) {
        if (!interfaceType(it)) throw ModelError(fmt::format("unknown provided interface type {}", it.value));
    }
    for (const auto& param : spec.parameters) {
        if (!valueParses(param.dataType, param.defaultValue)) {
            throw ModelError(fmt::format("default '{}' of parameter '{}' is not a valid {}", param.defaultValue,
                                         param.name, toString(param.dataType)));
        }
    }
    ComponentType type;
    type.uid = allocate(ElementKind::ComponentType);
    type.criticality = spec.criticality;
    type.name = spec.name;
    type.reliability = spec.reliability;
    for (const auto& param : spec.parameters) {
        type.parameterTypes.push_back(
            {allocate(ElementKind::ParameterType), param.name, param.dataType, param.defaultValue});
    }
    type.requiredInterfaceTypes = spec.requiredInterfaceTypes;
    type.providedInterfaceTypes = spec.providedInterfaceTypes;
    componentTypes_.push_back(std::move(type));
    return componentTypes_.back().uid;
}

Uid Architecture::addTenant(std::string name, double criticality) {
    if (tenantByName(name)) throw ModelError(fmt::format("duplicate tenant '{}'", name));
    Tenant tenant;
    tenant.uid = allocate(ElementKind::Tenant);
    tenant.criticality = criticality;
    tenant.name = std::move(name);
    tenants_.push_back(std::move(tenant));
    return tenants_.back().uid;
}

// ---- lookups ------------------------------------------------------------------

const InterfaceType* Architecture::interfaceType(Uid uid) const {
    for (const auto& type : interfaceTypes_) {
        if (type.uid == uid) return &type;
    }
    return nullptr;
}

const InterfaceType* Architecture::interfaceTypeByName(std::string_view fqName) const {
    for (const auto& type : interfaceTypes_) {
        if (type.fqName == fqName) return &type;
    }
    return nullptr;
}

const ComponentType* Architecture::componentType(Uid uid) const {
    for (const auto& type : componentTypes_) {
        if (type.uid == uid) return &type;
    }
    return nullptr;
}

const ComponentType* Architecture::componentTypeByName(std::string_view name) const {
    for (const auto& type : componentTypes_) {
        if (type.name == name) return &type;
    }
    return nullptr;
}

const ParameterType* Architecture::parameterType(Uid uid) const {
    for (const auto& type : componentTypes_) {
        for (const auto& param : type.parameterTypes) {
            if (param.uid == uid) return &param;
        }
    }
    return nullptr;
}

const Tenant* Architecture::tenant(Uid uid) const {
    for (const auto& t : tenants_) {
        if (t.uid == uid) return &t;
    }
    return nullptr;
}

const Tenant* Architecture::tenantByName(std::string_view name) const {
    for (const auto& t : tenants_) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

const Component* Architecture::component(Uid uid) const {
    ++reads_;
    auto it = components_.find(uid);
    return it == components_.end() ? nullptr : &it->second;
}

std::vector<const Component*> Architecture::componentsOf(Uid tenantUid) const {
    std::vector<const Component*> out;
    const Tenant* t = tenant(tenantUid);
    if (!t) return out;
    out.reserve(t->components.size());
    for (Uid uid : t->components) out.push_back(&components_.at(uid));
    reads_ += out.size();
    return out;
}

std::vector<const Component*> Architecture::components() const {
    std::vector<const Component*> out;
    out.reserve(components_.size());
    for (const auto& t : tenants_) {
        for (Uid uid : t.components) out.push_back(&components_.at(uid));
    }
    reads_ += out.size();
    return out;
}

std::vector<const Component*> Architecture::componentsOfType(Uid type) const {
    std::vector<const Component*> out;
    for (const Component* c : components()) {
        if (c->type == type) out.push_back(c);
    }
    return out;
}

const Connector* Architecture::connector(Uid uid) const {
    ++reads_;
    auto it = connectors_.find(uid);
    return it == connectors_.end() ? nullptr : &it->second;
}

std::vector<const Connector*> Architecture::connectors() const {
    std::vector<const Connector*> out;
    out.reserve(connectors_.size());
    for (const auto& t : tenants_) {
        for (Uid cuid : t.components) {
            for (const auto& req : components_.at(cuid).required) {
                if (req.connector) out.push_back(&connectors_.at(*req.connector));
            }
        }
    }
    reads_ += out.size();
    return out;
}

const RequiredInterface* Architecture::requiredInterface(Uid uid) const {
    ++reads_;
    auto it = interfaces_.find(uid);
    if (it == interfaces_.end() || it->second.provided) return nullptr;
    return &components_.at(it->second.component).required[it->second.index];
}

const ProvidedInterface* Architecture::providedInterface(Uid uid) const {
    ++reads_;
    auto it = interfaces_.find(uid);
    if (it == interfaces_.end() || !it->second.provided) return nullptr;
    return &components_.at(it->second.component).provided[it->second.index];
}

const Parameter* Architecture::parameter(Uid uid) const {
    ++reads_;
    auto it = parameters_.find(uid);
    if (it == parameters_.end()) return nullptr;
    return &components_.at(it->second.component).parameters[it->second.index];
}

std::optional<ElementKind> Architecture::findByUid(Uid uid) const {
    auto it = registry_.find(uid);
    if (it == registry_.end()) return std::nullopt;
    return it->second;
}

std::size_t Architecture::connectivity(Uid componentUid) const {
    const Component* c = component(componentUid);
    return c ? c->connectivity() : 0;
}

std::optional<Uid> Architecture::tenantOf(Uid componentUid) const {
    const Component* c = component(componentUid);
    if (!c) return std::nullopt;
    return c->tenant;
}

std::optional<Uid> Architecture::connectedProvider(Uid requiredUid) const {
    const RequiredInterface* req = requiredInterface(requiredUid);
    if (!req || !req->connector) return std::nullopt;
    return connectors_.at(*req->connector).target;
}

std::optional<Uid> Architecture::interfaceOwner(Uid interfaceUid) const {
    auto it = interfaces_.find(interfaceUid);
    if (it == interfaces_.end()) return std::nullopt;
    return it->second.component;
}

std::size_t Architecture::exceptionCount(Uid componentUid) const {
    const Component* c = component(componentUid);
    if (!c) return 0;
    std::size_t count = 0;
    for (const auto& prov : c->provided) {
        count += static_cast<std::size_t>(std::count_if(prov.exceptions.begin(), prov.exceptions.end(),
                                                        [&](const ExceptionRecord& e) {
                                                            return e.deployment == c->deployment;
                                                        }));
    }
    return count;
}

const MonitoredProperty* Architecture::property(Uid owner, std::string_view name) const {
    auto it = properties_.find({owner, std::string(name)});
    return it == properties_.end() ? nullptr : &it->second;
}

std::vector<const MonitoredProperty*> Architecture::properties() const {
    std::vector<const MonitoredProperty*> out;
    out.reserve(properties_.size());
    for (const auto& [key, prop] : properties_) out.push_back(&prop);
    return out;
}

const Annotation* Architecture::annotation(Uid uid) const {
    auto it = annotations_.find(uid);
    return it == annotations_.end() ? nullptr : &it->second;
}

// ---- mutation -----------------------------------------------------------------

Component& Architecture::mutableComponent(Uid uid) {
    auto it = components_.find(uid);
    if (it == components_.end()) throw ModelError(fmt::format("unknown component {}", uid.value));
    return it->second;
}

RequiredInterface& Architecture::mutableRequired(Uid uid) {
    auto it = interfaces_.find(uid);
    if (it == interfaces_.end() || it->second.provided) {
        throw ModelError(fmt::format("unknown required interface {}", uid.value));
    }
    return components_.at(it->second.component).required[it->second.index];
}

ProvidedInterface& Architecture::mutableProvided(Uid uid) {
    auto it = interfaces_.find(uid);
    if (it == interfaces_.end() || !it->second.provided) {
        throw ModelError(fmt::format("unknown provided interface {}", uid.value));
    }
    return components_.at(it->second.component).provided[it->second.index];
}

Tenant& Architecture::mutableTenant(Uid uid) {
    for (auto& t : tenants_) {
        if (t.uid == uid) return t;
    }
    throw ModelError(fmt::format("unknown tenant {}", uid.value));
}

Uid Architecture::doInstantiate(Uid typeUid, Uid tenantUid) {
    const ComponentType* type = componentType(typeUid);
    if (!type) throw ModelError(fmt::format("unknown component type {}", typeUid.value));
    Tenant& owner = mutableTenant(tenantUid);
    sealed_ = true;

    Component c;
    c.uid = allocate(ElementKind::Component);
    c.criticality = type->criticality;
    c.type = typeUid;
    c.tenant = tenantUid;
    for (const auto& pt : type->parameterTypes) {
        c.parameters.push_back({allocate(ElementKind::Parameter), pt.uid, pt.defaultValue});
    }
    for (Uid it : type->requiredInterfaceTypes) {
        c.required.push_back({allocate(ElementKind::RequiredInterface), it, c.uid, std::nullopt});
    }
    for (Uid it : type->providedInterfaceTypes) {
        ProvidedInterface prov;
        prov.uid = allocate(ElementKind::ProvidedInterface);
        prov.type = it;
        prov.component = c.uid;
        c.provided.push_back(std::move(prov));
    }
    for (std::size_t i = 0; i < c.parameters.size(); ++i) parameters_[c.parameters[i].uid] = {c.uid, i};
    for (std::size_t i = 0; i < c.required.size(); ++i) interfaces_[c.required[i].uid] = {c.uid, false, i};
    for (std::size_t i = 0; i < c.provided.size(); ++i) interfaces_[c.provided[i].uid] = {c.uid, true, i};

    Uid uid = c.uid;
    owner.components.push_back(uid);
    components_.emplace(uid, std::move(c));
    events_.emit(ChangeEventKind::ComponentAdded, uid, {{"tenant", str(tenantUid)}, {"type", str(typeUid)}});
    return uid;
}

void Architecture::doSetState(Uid uid, ComponentState state) {
    Component& c = mutableComponent(uid);
    ComponentState old = c.state;
    if (old == ComponentState::Undeployed && state == ComponentState::Deployed) ++c.deployment;
    c.state = state;
    events_.emit(ChangeEventKind::ComponentLifecycleChanged, uid,
                 {{"tenant", str(c.tenant)}, {"old", std::string(toString(old))}, {"new", std::string(toString(state))}});
}

void Architecture::doRemoveComponent(Uid uid) {
    Component& c = mutableComponent(uid);
    for (const auto& req : c.required) {
        if (req.connector) doDisconnect(*req.connector);
    }
    for (const auto& prov : c.provided) {
        const std::vector<Uid> incoming = prov.connectors;
        for (Uid conn : incoming) doDisconnect(conn);
    }
    events_.emit(ChangeEventKind::ComponentRemoved, uid, {{"tenant", str(c.tenant)}, {"type", str(c.type)}});

    unregister(uid);
    for (const auto& p : c.parameters) {
        unregister(p.uid);
        parameters_.erase(p.uid);
    }
    for (const auto& req : c.required) {
        unregister(req.uid);
        interfaces_.erase(req.uid);
    }
    for (const auto& prov : c.provided) {
        unregister(prov.uid);
        interfaces_.erase(prov.uid);
        for (const auto& e : prov.exceptions) unregister(e.uid);
        for (const auto& s : prov.stats) unregister(s.uid);
    }
    for (auto it = properties_.begin(); it != properties_.end();) {
        if (it->first.first == uid) {
            unregister(it->second.uid);
            it = properties_.erase(it);
        } else {
            ++it;
        }
    }
    auto& list = mutableTenant(c.tenant).components;
    list.erase(std::find(list.begin(), list.end(), uid));
    components_.erase(uid);
}

Uid Architecture::doConnect(Uid requiredUid, Uid providedUid) {
    RequiredInterface& req = mutableRequired(requiredUid);
    ProvidedInterface& prov = mutableProvided(providedUid);
    Connector conn;
    conn.uid = allocate(ElementKind::Connector);
    conn.source = requiredUid;
    conn.target = providedUid;
    req.connector = conn.uid;
    insertSorted(prov.connectors, conn.uid);
    connectors_.emplace(conn.uid, conn);
    events_.emit(ChangeEventKind::ConnectorAdded, conn.uid,
                 {{"source", str(requiredUid)},
                  {"target", str(providedUid)},
                  {"sourceComponent", str(req.component)},
                  {"targetComponent", str(prov.component)}});
    return conn.uid;
}

void Architecture::doDisconnect(Uid connUid) {
    auto it = connectors_.find(connUid);
    if (it == connectors_.end()) throw ModelError(fmt::format("unknown connector {}", connUid.value));
    const Connector conn = it->second;
    RequiredInterface& req = mutableRequired(conn.source);
    ProvidedInterface& prov = mutableProvided(conn.target);
    req.connector.reset();
    prov.connectors.erase(std::find(prov.connectors.begin(), prov.connectors.end(), connUid));
    events_.emit(ChangeEventKind::ConnectorRemoved, connUid,
                 {{"source", str(conn.source)},
                  {"target", str(conn.target)},
                  {"sourceComponent", str(req.component)},
                  {"targetComponent", str(prov.component)}});
    unregister(connUid);
    connectors_.erase(it);
}

void Architecture::doReroute(Uid connUid, Uid providedUid) {
    auto it = connectors_.find(connUid);
    if (it == connectors_.end()) throw ModelError(fmt::format("unknown connector {}", connUid.value));
    Connector& conn = it->second;
    ProvidedInterface& oldTarget = mutableProvided(conn.target);
    ProvidedInterface& newTarget = mutableProvided(providedUid);
    const Uid oldTargetUid = conn.target;
    oldTarget.connectors.erase(std::find(oldTarget.connectors.begin(), oldTarget.connectors.end(), connUid));
    insertSorted(newTarget.connectors, connUid);
    conn.target = providedUid;
    events_.emit(ChangeEventKind::ConnectorRerouted, connUid,
                 {{"source", str(conn.source)},
                  {"oldTarget", str(oldTargetUid)},
                  {"newTarget", str(providedUid)},
                  {"sourceComponent", str(interfaces_.at(conn.source).component)},
                  {"oldTargetComponent", str(oldTarget.component)},
                  {"newTargetComponent", str(newTarget.component)}});
}

void Architecture::doSetParameter(Uid paramUid, std::string value) {
    auto slot = parameters_.find(paramUid);
    if (slot == parameters_.end()) throw ModelError(fmt::format("unknown parameter {}", paramUid.value));
    Parameter& param = components_.at(slot->second.component).parameters[slot->second.index];
    std::string old = std::exchange(param.value, std::move(value));
    const ParameterType* type = parameterType(param.type);
    events_.emit(ChangeEventKind::ParameterValueChanged, paramUid,
                 {{"component", str(slot->second.component)},
                  {"name", type ? type->name : std::string{}},
                  {"old", std::move(old)},
                  {"new", param.value}});
}

Uid Architecture::doRecordException(Uid providedUid, Uid method, std::string type, std::string message,
                                    std::string stackTrace) {
    ProvidedInterface& prov = mutableProvided(providedUid);
    const Component& owner = components_.at(prov.component);
    ExceptionRecord record;
    record.uid = allocate(ElementKind::Exception);
    record.method = method;
    record.type = std::move(type);
    record.message = std::move(message);
    record.stackTrace = std::move(stackTrace);
    record.deployment = owner.deployment;
    prov.exceptions.push_back(record);
    events_.emit(ChangeEventKind::ExceptionOccurred, providedUid,
                 {{"component", str(prov.component)},
                  {"exception", str(record.uid)},
                  {"type", record.type},
                  {"method", str(method)}});
    return record.uid;
}

Uid Architecture::doUpdateStats(Uid providedUid, Uid method, const StatsValues& values) {
    ProvidedInterface& prov = mutableProvided(providedUid);
    auto it = std::find_if(prov.stats.begin(), prov.stats.end(),
                           [&](const PerformanceStats& s) { return s.method == method; });
    if (it == prov.stats.end()) {
        prov.stats.push_back({allocate(ElementKind::PerformanceStats), method, values});
        it = std::prev(prov.stats.end());
    } else {
        it->values = values;
    }
    events_.emit(ChangeEventKind::PerformanceStatsUpdated, providedUid,
                 {{"component", str(prov.component)},
                  {"stats", str(it->uid)},
                  {"method", str(method)},
                  {"minTime", fmt::format("{}", values.minTime)},
                  {"maxTime", fmt::format("{}", values.maxTime)},
                  {"totalTime", fmt::format("{}", values.totalTime)},
                  {"invocationCount", fmt::format("{}", values.invocationCount)}});
    return it->uid;
}

Uid Architecture::doSetProperty(Uid owner, std::string name, std::string description, DataType dataType,
                                std::string unit, std::string value) {
    auto key = std::make_pair(owner, name);
    auto it = properties_.find(key);
    if (it == properties_.end()) {
        MonitoredProperty prop;
        prop.uid = allocate(ElementKind::MonitoredProperty);
        prop.owner = owner;
        prop.name = name;
        prop.description = std::move(description);
        prop.dataType = dataType;
        prop.unit = std::move(unit);
        prop.value = value;
        Uid uid = prop.uid;
        properties_.emplace(std::move(key), std::move(prop));
        events_.emit(ChangeEventKind::MonitoredPropertyAdded, owner,
                     {{"property", str(uid)}, {"name", std::move(name)}, {"new", std::move(value)}});
        return uid;
    }
    MonitoredProperty& prop = it->second;
    prop.description = std::move(description);
    prop.dataType = dataType;
    prop.unit = std::move(unit);
    std::string old = std::exchange(prop.value, value);
    events_.emit(ChangeEventKind::MonitoredPropertyUpdated, owner,
                 {{"property", str(prop.uid)}, {"name", std::move(name)}, {"old", std::move(old)}, {"new", std::move(value)}});
    return prop.uid;
}

Uid Architecture::doAnnotate(Annotation annotation) {
    annotation.uid = allocate(ElementKind::Annotation);
    Uid uid = annotation.uid;
    annotations_.emplace(uid, std::move(annotation));
    return uid;
}

void Architecture::doRemoveAnnotation(Uid uid) {
    if (annotations_.erase(uid) == 0) throw ModelError(fmt::format("unknown annotation {}", uid.value));
    unregister(uid);
}

}  // namespace mrubis::comparch
