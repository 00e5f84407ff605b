#include "mrubis/comparch/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mrubis/comparch/errors.hpp"

namespace mrubis::comparch {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFormat = "comparch-snapshot/1";

Json uidList(const std::vector<Uid>& uids) {
    Json out = Json::array();
    for (Uid uid : uids) out.push_back(uid.value);
    return out;
}

std::vector<Uid> readUidList(const Json& json) {
    std::vector<Uid> out;
    for (const auto& v : json) out.emplace_back(v.get<std::uint64_t>());
    return out;
}

Uid readUid(const Json& json, const char* key) { return Uid{json.at(key).get<std::uint64_t>()}; }

Json statsJson(const StatsValues& v) {
    return Json{{"min_time", v.minTime},
                {"max_time", v.maxTime},
                {"total_time", v.totalTime},
                {"invocation_count", v.invocationCount}};
}

}  // namespace

std::string serializeSnapshot(const Architecture& model) {
    Json doc;
    doc["format"] = kFormat;
    doc["architecture"] = model.name();
    doc["sealed"] = model.sealed();
    doc["counters"] = Json{{"next_uid", model.nextUid()},
                           {"next_annotation_uid", model.nextAnnotationUid()},
                           {"event_clock", model.events().clock()}};

    Json interfaceTypes = Json::array();
    for (const auto& type : model.interfaceTypes()) {
        Json methods = Json::array();
        for (const auto& m : type.methods) methods.push_back(Json{{"uid", m.uid.value}, {"signature", m.signature}});
        interfaceTypes.push_back(Json{{"uid", type.uid.value},
                                      {"fq_name", type.fqName},
                                      {"criticality", type.criticality},
                                      {"methods", std::move(methods)}});
    }
    doc["interface_types"] = std::move(interfaceTypes);

    Json componentTypes = Json::array();
    for (const auto& type : model.componentTypes()) {
        Json params = Json::array();
        for (const auto& p : type.parameterTypes) {
            params.push_back(Json{{"uid", p.uid.value},
                                  {"name", p.name},
                                  {"data_type", toString(p.dataType)},
                                  {"default", p.defaultValue}});
        }
        componentTypes.push_back(Json{{"uid", type.uid.value},
                                      {"name", type.name},
                                      {"criticality", type.criticality},
                                      {"reliability", type.reliability},
                                      {"parameter_types", std::move(params)},
                                      {"required", uidList(type.requiredInterfaceTypes)},
                                      {"provided", uidList(type.providedInterfaceTypes)}});
    }
    doc["component_types"] = std::move(componentTypes);

    Json tenants = Json::array();
    Json exceptions = Json::array();
    Json stats = Json::array();
    for (const auto& tenant : model.tenants()) {
        Json components = Json::array();
        for (Uid cuid : tenant.components) {
            const Component& c = *model.component(cuid);
            Json params = Json::array();
            for (const auto& p : c.parameters) {
                params.push_back(Json{{"uid", p.uid.value}, {"type", p.type.value}, {"value", p.value}});
            }
            Json required = Json::array();
            for (const auto& r : c.required) required.push_back(Json{{"uid", r.uid.value}, {"type", r.type.value}});
            Json provided = Json::array();
            for (const auto& p : c.provided) {
                provided.push_back(Json{{"uid", p.uid.value}, {"type", p.type.value}});
                for (const auto& e : p.exceptions) {
                    exceptions.push_back(Json{{"uid", e.uid.value},
                                              {"interface", p.uid.value},
                                              {"method", e.method.value},
                                              {"deployment", e.deployment},
                                              {"type", e.type},
                                              {"message", e.message},
                                              {"stack_trace", e.stackTrace}});
                }
                for (const auto& s : p.stats) {
                    Json entry{{"uid", s.uid.value}, {"interface", p.uid.value}, {"method", s.method.value}};
                    entry.update(statsJson(s.values));
                    stats.push_back(std::move(entry));
                }
            }
            components.push_back(Json{{"uid", c.uid.value},
                                      {"type", c.type.value},
                                      {"criticality", c.criticality},
                                      {"state", toString(c.state)},
                                      {"deployment", c.deployment},
                                      {"parameters", std::move(params)},
                                      {"required", std::move(required)},
                                      {"provided", std::move(provided)}});
        }
        tenants.push_back(Json{{"uid", tenant.uid.value},
                               {"name", tenant.name},
                               {"criticality", tenant.criticality},
                               {"components", std::move(components)}});
    }
    doc["tenants"] = std::move(tenants);

    std::vector<const Connector*> connectors = model.connectors();
    std::sort(connectors.begin(), connectors.end(), [](auto* a, auto* b) { return a->uid < b->uid; });
    Json connectorJson = Json::array();
    for (const Connector* conn : connectors) {
        connectorJson.push_back(Json{{"uid", conn->uid.value},
                                     {"criticality", conn->criticality},
                                     {"source", conn->source.value},
                                     {"target", conn->target.value}});
    }
    doc["connectors"] = std::move(connectorJson);

    Json properties = Json::array();
    for (const MonitoredProperty* p : model.properties()) {
        properties.push_back(Json{{"uid", p->uid.value},
                                  {"owner", p->owner.value},
                                  {"name", p->name},
                                  {"description", p->description},
                                  {"data_type", toString(p->dataType)},
                                  {"unit", p->unit},
                                  {"value", p->value}});
    }
    doc["observations"] = Json{{"exceptions", std::move(exceptions)},
                               {"performance_stats", std::move(stats)},
                               {"monitored_properties", std::move(properties)}};

    Json annotations = Json::array();
    for (const auto& [uid, a] : model.annotations()) {
        Json entry{{"uid", uid.value}, {"name", a.name}, {"type", a.type}, {"description", a.description}};
        if (const auto* wd = std::get_if<WorkingData>(&a.body)) {
            entry["kind"] = "working-data";
            entry["value"] = wd->value;
            entry["unit"] = wd->unit;
            entry["concerned_elements"] = uidList(wd->concernedElements);
        } else if (const auto* issue = std::get_if<Issue>(&a.body)) {
            entry["kind"] = "issue";
            entry["utility_drop"] = issue->utilityDrop;
            entry["impacts"] = uidList(issue->impacts);
        } else {
            const auto& s = std::get<AdaptationStrategy>(a.body);
            entry["kind"] = "adaptation-strategy";
            entry["utility_increase"] = s.utilityIncrease;
            entry["costs"] = s.costs;
            entry["assigned_issue"] = s.assignedIssue.value;
            entry["input_parameters"] = uidList(s.inputParameters);
        }
        annotations.push_back(std::move(entry));
    }
    doc["annotations"] = std::move(annotations);

    return doc.dump(1) + "\n";
}

Architecture parseSnapshot(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::exception& e) {
        throw ModelError(fmt::format("snapshot is not valid JSON: {}", e.what()));
    }
    try {
        if (doc.at("format").get<std::string>() != kFormat) throw ModelError("unsupported snapshot format");
        Architecture model(doc.at("architecture").get<std::string>());

        for (const auto& it : doc.at("interface_types")) {
            InterfaceType type;
            type.uid = readUid(it, "uid");
            type.fqName = it.at("fq_name").get<std::string>();
            type.criticality = it.at("criticality").get<double>();
            model.registerUid(type.uid, ElementKind::InterfaceType);
            for (const auto& m : it.at("methods")) {
                MethodSpecification method{readUid(m, "uid"), m.at("signature").get<std::string>()};
                model.registerUid(method.uid, ElementKind::MethodSpecification);
                type.methods.push_back(std::move(method));
            }
            model.interfaceTypes_.push_back(std::move(type));
        }

        for (const auto& ct : doc.at("component_types")) {
            ComponentType type;
            type.uid = readUid(ct, "uid");
            type.name = ct.at("name").get<std::string>();
            type.criticality = ct.at("criticality").get<double>();
            type.reliability = ct.at("reliability").get<double>();
            model.registerUid(type.uid, ElementKind::ComponentType);
            for (const auto& p : ct.at("parameter_types")) {
                auto dataType = parseDataType(p.at("data_type").get<std::string>());
                if (!dataType) throw ModelError("unknown parameter data type");
                ParameterType param{readUid(p, "uid"), p.at("name").get<std::string>(), *dataType,
                                    p.at("default").get<std::string>()};
                model.registerUid(param.uid, ElementKind::ParameterType);
                type.parameterTypes.push_back(std::move(param));
            }
            type.requiredInterfaceTypes = readUidList(ct.at("required"));
            type.providedInterfaceTypes = readUidList(ct.at("provided"));
            for (Uid it : type.requiredInterfaceTypes) {
                if (!model.interfaceType(it)) throw ModelError("component type references unknown interface type");
            }
            for (Uid it : type.providedInterfaceTypes) {
                if (!model.interfaceType(it)) throw ModelError("component type references unknown interface type");
            }
            model.componentTypes_.push_back(std::move(type));
        }

        for (const auto& t : doc.at("tenants")) {
            Tenant tenant;
            tenant.uid = readUid(t, "uid");
            tenant.name = t.at("name").get<std::string>();
            tenant.criticality = t.at("criticality").get<double>();
            model.registerUid(tenant.uid, ElementKind::Tenant);
            for (const auto& cj : t.at("components")) {
                Component c;
                c.uid = readUid(cj, "uid");
                c.type = readUid(cj, "type");
                c.tenant = tenant.uid;
                c.criticality = cj.at("criticality").get<double>();
                auto state = parseComponentState(cj.at("state").get<std::string>());
                if (!state) throw ModelError("unknown component state");
                c.state = *state;
                c.deployment = cj.at("deployment").get<std::uint32_t>();
                const ComponentType* type = model.componentType(c.type);
                if (!type) throw ModelError(fmt::format("component {} has unknown type", c.uid.value));
                model.registerUid(c.uid, ElementKind::Component);

                const auto& params = cj.at("parameters");
                if (params.size() != type->parameterTypes.size()) throw ModelError("parameter list mismatch");
                for (std::size_t i = 0; i < params.size(); ++i) {
                    Parameter p{readUid(params[i], "uid"), readUid(params[i], "type"),
                                params[i].at("value").get<std::string>()};
                    if (p.type != type->parameterTypes[i].uid ||
                        !valueParses(type->parameterTypes[i].dataType, p.value)) {
                        throw ModelError(fmt::format("invalid parameter {}", p.uid.value));
                    }
                    model.registerUid(p.uid, ElementKind::Parameter);
                    model.parameters_[p.uid] = {c.uid, i};
                    c.parameters.push_back(std::move(p));
                }
                const auto& required = cj.at("required");
                if (required.size() != type->requiredInterfaceTypes.size()) throw ModelError("required list mismatch");
                for (std::size_t i = 0; i < required.size(); ++i) {
                    RequiredInterface r{readUid(required[i], "uid"), readUid(required[i], "type"), c.uid, std::nullopt};
                    if (r.type != type->requiredInterfaceTypes[i]) throw ModelError("required interface type mismatch");
                    model.registerUid(r.uid, ElementKind::RequiredInterface);
                    model.interfaces_[r.uid] = {c.uid, false, i};
                    c.required.push_back(r);
                }
                const auto& provided = cj.at("provided");
                if (provided.size() != type->providedInterfaceTypes.size()) throw ModelError("provided list mismatch");
                for (std::size_t i = 0; i < provided.size(); ++i) {
                    ProvidedInterface p;
                    p.uid = readUid(provided[i], "uid");
                    p.type = readUid(provided[i], "type");
                    p.component = c.uid;
                    if (p.type != type->providedInterfaceTypes[i]) throw ModelError("provided interface type mismatch");
                    model.registerUid(p.uid, ElementKind::ProvidedInterface);
                    model.interfaces_[p.uid] = {c.uid, true, i};
                    c.provided.push_back(std::move(p));
                }
                tenant.components.push_back(c.uid);
                model.components_.emplace(c.uid, std::move(c));
            }
            model.tenants_.push_back(std::move(tenant));
        }

        for (const auto& cj : doc.at("connectors")) {
            Connector conn{readUid(cj, "uid"), cj.at("criticality").get<double>(), readUid(cj, "source"),
                           readUid(cj, "target")};
            RequiredInterface& req = model.mutableRequired(conn.source);
            ProvidedInterface& prov = model.mutableProvided(conn.target);
            if (req.connector) throw ModelError("required interface connected twice");
            const Component& src = model.components_.at(req.component);
            const Component& dst = model.components_.at(prov.component);
            if (src.tenant != dst.tenant ||
                model.interfaceType(req.type)->fqName != model.interfaceType(prov.type)->fqName) {
                throw ModelError(fmt::format("connector {} violates wiring constraints", conn.uid.value));
            }
            model.registerUid(conn.uid, ElementKind::Connector);
            req.connector = conn.uid;
            prov.connectors.insert(std::lower_bound(prov.connectors.begin(), prov.connectors.end(), conn.uid),
                                   conn.uid);
            model.connectors_.emplace(conn.uid, conn);
        }

        const auto& observations = doc.at("observations");
        for (const auto& ej : observations.at("exceptions")) {
            ExceptionRecord e;
            e.uid = readUid(ej, "uid");
            e.method = readUid(ej, "method");
            e.deployment = ej.at("deployment").get<std::uint32_t>();
            e.type = ej.at("type").get<std::string>();
            e.message = ej.at("message").get<std::string>();
            e.stackTrace = ej.at("stack_trace").get<std::string>();
            model.registerUid(e.uid, ElementKind::Exception);
            model.mutableProvided(readUid(ej, "interface")).exceptions.push_back(std::move(e));
        }
        for (const auto& sj : observations.at("performance_stats")) {
            PerformanceStats s;
            s.uid = readUid(sj, "uid");
            s.method = readUid(sj, "method");
            s.values.minTime = sj.at("min_time").get<double>();
            s.values.maxTime = sj.at("max_time").get<double>();
            s.values.totalTime = sj.at("total_time").get<double>();
            s.values.invocationCount = sj.at("invocation_count").get<std::uint64_t>();
            model.registerUid(s.uid, ElementKind::PerformanceStats);
            model.mutableProvided(readUid(sj, "interface")).stats.push_back(s);
        }
        for (const auto& pj : observations.at("monitored_properties")) {
            MonitoredProperty p;
            p.uid = readUid(pj, "uid");
            p.owner = readUid(pj, "owner");
            p.name = pj.at("name").get<std::string>();
            p.description = pj.at("description").get<std::string>();
            auto dataType = parseDataType(pj.at("data_type").get<std::string>());
            if (!dataType || !valueParses(*dataType, pj.at("value").get<std::string>())) {
                throw ModelError(fmt::format("invalid monitored property {}", p.uid.value));
            }
            p.dataType = *dataType;
            p.unit = pj.at("unit").get<std::string>();
            p.value = pj.at("value").get<std::string>();
            if (!model.findByUid(p.owner)) throw ModelError("monitored property has unknown owner");
            model.registerUid(p.uid, ElementKind::MonitoredProperty);
            model.properties_.emplace(std::make_pair(p.owner, p.name), p);
        }

        for (const auto& aj : doc.at("annotations")) {
            Annotation a;
            a.uid = readUid(aj, "uid");
            a.name = aj.at("name").get<std::string>();
            a.type = aj.at("type").get<std::string>();
            a.description = aj.at("description").get<std::string>();
            const auto kind = aj.at("kind").get<std::string>();
            if (kind == "working-data") {
                a.body = WorkingData{aj.at("value").get<std::string>(), aj.at("unit").get<std::string>(),
                                     readUidList(aj.at("concerned_elements"))};
            } else if (kind == "issue") {
                a.body = Issue{aj.at("utility_drop").get<double>(), readUidList(aj.at("impacts"))};
            } else if (kind == "adaptation-strategy") {
                a.body = AdaptationStrategy{aj.at("utility_increase").get<double>(), aj.at("costs").get<double>(),
                                            readUid(aj, "assigned_issue"), readUidList(aj.at("input_parameters"))};
            } else {
                throw ModelError(fmt::format("unknown annotation kind '{}'", kind));
            }
            model.registerUid(a.uid, ElementKind::Annotation);
            model.annotations_.emplace(a.uid, std::move(a));
        }

        const auto& counters = doc.at("counters");
        model.nextUid_ = counters.at("next_uid").get<std::uint64_t>();
        model.nextAnnotationUid_ = counters.at("next_annotation_uid").get<std::uint64_t>();
        model.events_.resetClock(counters.at("event_clock").get<std::uint64_t>());
        model.sealed_ = doc.at("sealed").get<bool>();
        for (const auto& [uid, kind] : model.registry_) {
            const bool annotation = kind == ElementKind::Annotation;
            if ((annotation && uid.value >= model.nextAnnotationUid_) ||
                (!annotation && uid.value >= model.nextUid_)) {
                throw ModelError("uid counters lag behind element uids");
            }
        }
        model.resetReads();
        return model;
    } catch (const Json::exception& e) {
        throw ModelError(fmt::format("malformed snapshot: {}", e.what()));
    }
}

void writeSnapshot(const Architecture& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError(fmt::format("cannot write snapshot to {}", path.string()));
    out << serializeSnapshot(model);
    if (!out) throw ModelError(fmt::format("failed writing snapshot to {}", path.string()));
}

Architecture readSnapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError(fmt::format("cannot read snapshot {}", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseSnapshot(buffer.str());
}

}  // namespace mrubis::comparch
