#include <doctest.h>

#include <random>
#include <set>

#include "mrubis/comparch/errors.hpp"
#include "mrubis/comparch/snapshot.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mrubis::comparch;
using fixture::Tiny;

namespace {

std::vector<ChangeEventKind> kinds(const std::vector<ChangeEvent>& events) {
    std::vector<ChangeEventKind> out;
    for (const auto& e : events) out.push_back(e.kind);
    return out;
}

}  // namespace

TEST_CASE("instantiate creates an undeployed, unconnected component with default parameters") {
    Tiny t;
    (void)t.model.events().drain();
    Uid c = t.sim.instantiate(t.server, t.shopA);
    const auto& comp = t.get(c);
    CHECK(comp.state == ComponentState::Undeployed);
    CHECK(t.model.connectivity(c) == 0);
    REQUIRE(comp.parameters.size() == 2);
    CHECK(comp.parameters[0].value == "8");
    CHECK(comp.parameters[1].value == "true");
    CHECK(comp.provided.size() == 1);
    CHECK(comp.required.empty());
    CHECK(comp.criticality == 4.0);
    auto events = t.model.events().drain();
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ChangeEventKind::ComponentAdded);
    CHECK(events[0].subject == c);

    CHECK_THROWS_AS(t.sim.instantiate(Uid{9999}, t.shopA), ModelError);
    CHECK_THROWS_AS(t.sim.instantiate(t.server, Uid{9999}), ModelError);
}

TEST_CASE("type level is frozen once sealed") {
    Tiny t;
    CHECK_THROWS_AS(t.model.addInterfaceType("t.ILate", {"x()"}), ModelError);
    CHECK_THROWS_AS(t.model.addComponentType({"Late", 1.0, 1.0, {}, {}, {}}), ModelError);
}

TEST_CASE("lifecycle transitions") {
    Tiny t;
    Uid c = t.started(t.server, t.shopA);
    (void)t.model.events().drain();

    t.engine.setState(c, ComponentState::Deployed);
    CHECK(t.get(c).state == ComponentState::Deployed);
    CHECK_THROWS_AS(t.engine.setState(c, ComponentState::Unknown), PermissionError);
    CHECK(t.get(c).state == ComponentState::Deployed);

    t.engine.setState(c, ComponentState::Started);
    (void)t.model.events().drain();
    t.sim.setState(c, ComponentState::Unknown);
    auto events = t.model.events().drain();
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ChangeEventKind::ComponentLifecycleChanged);
    CHECK(events[0].get("old") == "STARTED");
    CHECK(events[0].get("new") == "UNKNOWN");

    CHECK_THROWS_AS(t.engine.setState(c, ComponentState::Started), ModelError);
    t.engine.setState(c, ComponentState::Deployed);

    Uid fresh = t.sim.instantiate(t.client, t.shopA);
    CHECK_THROWS_AS(t.engine.setState(fresh, ComponentState::Started), ModelError);
    CHECK_THROWS_AS(t.engine.setState(fresh, ComponentState::Undeployed), ModelError);
}

TEST_CASE("permission matrix for lifecycle transitions") {
    using S = ComponentState;
    const S all[] = {S::Undeployed, S::Deployed, S::Started, S::Unknown};
    // expected engine transitions, written out independently of the implementation
    const std::set<std::pair<S, S>> engineAllowed{{S::Undeployed, S::Deployed}, {S::Deployed, S::Undeployed},
                                                  {S::Deployed, S::Started},    {S::Started, S::Deployed},
                                                  {S::Unknown, S::Deployed}};
    for (S from : all) {
        for (S to : all) {
            const std::string fromName(toString(from));
            CAPTURE(fromName);
            const std::string toName(toString(to));
            CAPTURE(toName);
            const bool engine = engineAllowed.count({from, to}) > 0;
            const bool simulator = engine || (to == S::Unknown && from != S::Unknown);
            CHECK(transitionAllowed(Role::Engine, from, to) == engine);
            CHECK(transitionAllowed(Role::Simulator, from, to) == simulator);
        }
    }
}

TEST_CASE("engine handles cannot touch runtime observations") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    const auto before = serializeSnapshot(t.model);
    CHECK_THROWS_AS(t.engine.recordException(t.prov(s), t.put, "E", "m", "st"), PermissionError);
    CHECK_THROWS_AS(t.engine.updatePerformanceStats(t.prov(s), t.put, {1, 2, 3, 2}), PermissionError);
    CHECK_THROWS_AS(t.engine.setMonitoredProperty(t.shopA, "load", "", DataType::Real, "%", "1.5"), PermissionError);
    CHECK(serializeSnapshot(t.model) == before);
}

TEST_CASE("removeComponent cascades to every attached connector") {
    Tiny t;
    Uid hub = t.started(t.relay, t.shopA);
    Uid up = t.started(t.server, t.shopA);
    Uid c1 = t.started(t.client, t.shopA);
    Uid c2 = t.started(t.client, t.shopA);
    t.sim.connect(t.req(hub), t.prov(up));
    t.sim.connect(t.req(c1), t.prov(hub));
    t.sim.connect(t.req(c2), t.prov(hub));
    CHECK(t.model.connectivity(hub) == 3);
    const auto count = t.model.componentsOf(t.shopA).size();
    (void)t.model.events().drain();

    t.engine.removeComponent(hub);
    auto events = t.model.events().drain();
    CHECK(kinds(events) == std::vector{ChangeEventKind::ConnectorRemoved, ChangeEventKind::ConnectorRemoved,
                                       ChangeEventKind::ConnectorRemoved, ChangeEventKind::ComponentRemoved});
    // required side first, then the provided side
    CHECK(events[0].getUid("sourceComponent") == hub);
    CHECK(events[1].getUid("targetComponent") == hub);
    CHECK(t.model.componentsOf(t.shopA).size() == count - 1);
    CHECK_FALSE(t.model.findByUid(hub).has_value());
    CHECK(t.model.connectivity(up) == 0);
    CHECK_FALSE(t.get(c1).required[0].connector.has_value());
    CHECK_THROWS_AS(t.engine.removeComponent(hub), ModelError);
}

TEST_CASE("connect checks type, tenant and occupancy") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    Uid c = t.started(t.client, t.shopA);
    Uid odd = t.started(t.odd, t.shopA);
    Uid far = t.started(t.client, t.shopB);

    t.engine.connect(t.req(c), t.prov(s));
    CHECK(t.model.connectivity(s) == 1);
    CHECK(t.model.connectivity(c) == 1);
    CHECK(t.model.connectedProvider(t.req(c)) == t.prov(s));

    CHECK_THROWS_AS(t.engine.connect(t.req(odd), t.prov(s)), ModelError);
    CHECK_THROWS_AS(t.engine.connect(t.req(far), t.prov(s)), ModelError);
    CHECK_THROWS_AS(t.engine.connect(t.req(c), t.prov(s)), ModelError);
    CHECK(t.model.connectorCount() == 1);
}

TEST_CASE("reroute replaces the target and emits one event") {
    Tiny t;
    Uid s1 = t.started(t.server, t.shopA);
    Uid s2 = t.started(t.server, t.shopA);
    Uid r = t.started(t.relay, t.shopA);
    Uid c = t.started(t.client, t.shopA);
    Uid k = t.sim.connect(t.req(c), t.prov(s1));
    (void)t.model.events().drain();

    t.engine.reroute(k, t.prov(s2));
    CHECK(t.model.connectivity(c) == 1);
    CHECK(t.model.connectivity(s1) == 0);
    CHECK(t.model.connectivity(s2) == 1);
    auto events = t.model.events().drain();
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ChangeEventKind::ConnectorRerouted);
    CHECK(events[0].getUid("oldTarget") == t.prov(s1));
    CHECK(events[0].getUid("newTarget") == t.prov(s2));
    Uid far = t.started(t.server, t.shopB);
    CHECK_THROWS_AS(t.engine.reroute(k, t.prov(far)), ModelError);
    t.engine.reroute(k, t.prov(r));
    CHECK(t.model.connectivity(r) == 1);
}

TEST_CASE("reroute rejects a provider of another type") {
    Architecture m("mixed");
    Uid a = m.addInterfaceType("x.IA", {"a()"});
    Uid b = m.addInterfaceType("x.IB", {"b()"});
    Uid pa = m.addComponentType({"PA", 1, 1, {}, {}, {a}});
    Uid pb = m.addComponentType({"PB", 1, 1, {}, {}, {b}});
    Uid ca = m.addComponentType({"CA", 1, 1, {}, {a}, {}});
    Uid shop = m.addTenant("s");
    ModelHandle h(Role::Engine, m);
    Uid x = h.instantiate(pa, shop);
    Uid y = h.instantiate(pb, shop);
    Uid z = h.instantiate(ca, shop);
    Uid k = h.connect(m.component(z)->required[0].uid, m.component(x)->provided[0].uid);
    (void)m.events().drain();
    CHECK_THROWS_AS(h.reroute(k, m.component(y)->provided[0].uid), ModelError);
    CHECK(m.events().drain().empty());
    CHECK(m.connector(k)->target == m.component(x)->provided[0].uid);
}

TEST_CASE("setParameter validates values and reports old and new") {
    Tiny t;
    Uid s = t.sim.instantiate(t.server, t.shopA);
    Uid size = t.get(s).parameters[0].uid;
    Uid fast = t.get(s).parameters[1].uid;
    (void)t.model.events().drain();

    t.engine.setParameter(size, "42");
    CHECK(t.model.parameter(size)->value == "42");
    CHECK_THROWS_AS(t.engine.setParameter(size, "abc"), ModelError);
    CHECK(t.model.parameter(size)->value == "42");

    t.engine.setParameter(fast, "false");
    auto events = t.model.events().drain();
    REQUIRE(events.size() == 2);
    CHECK(events[1].kind == ChangeEventKind::ParameterValueChanged);
    CHECK(events[1].get("old") == "true");
    CHECK(events[1].get("new") == "false");
    CHECK(events[1].get("name") == "fast");
}

TEST_CASE("observations are recorded by the simulator") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    (void)t.model.events().drain();

    t.sim.recordException(t.prov(s), t.put, "IOError", "disk", "at x");
    CHECK(t.get(s).provided[0].exceptions.size() == 1);
    CHECK(t.model.exceptionCount(s) == 1);

    t.sim.updatePerformanceStats(t.prov(s), t.put, {10, 40, 100, 4});
    REQUIRE(t.get(s).provided[0].stats.size() == 1);
    CHECK(t.get(s).provided[0].stats[0].values.average() == std::optional<double>(25.0));
    CHECK_THROWS_AS(t.sim.updatePerformanceStats(t.prov(s), t.put, {50, 40, 100, 4}), ModelError);
    CHECK_FALSE(StatsValues{}.average().has_value());

    t.sim.setMonitoredProperty(t.shopA, "load", "cpu load", DataType::Real, "%", "0.5");
    t.sim.setMonitoredProperty(t.shopA, "load", "cpu load", DataType::Real, "%", "0.75");
    CHECK(t.model.property(t.shopA, "load")->value == "0.75");
    CHECK(kinds(t.model.events().drain()) ==
          std::vector{ChangeEventKind::ExceptionOccurred, ChangeEventKind::PerformanceStatsUpdated,
                      ChangeEventKind::MonitoredPropertyAdded, ChangeEventKind::MonitoredPropertyUpdated});
}

TEST_CASE("exceptions count per deployment") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    for (int i = 0; i < 3; ++i) t.sim.recordException(t.prov(s), t.put, "E", "m", "");
    CHECK(t.model.exceptionCount(s) == 3);
    t.engine.setState(s, ComponentState::Deployed);
    CHECK(t.model.exceptionCount(s) == 3);
    t.engine.setState(s, ComponentState::Undeployed);
    t.engine.setState(s, ComponentState::Deployed);
    CHECK(t.model.exceptionCount(s) == 0);
    CHECK(t.get(s).provided[0].exceptions.size() == 3);
}

TEST_CASE("annotations hold engine knowledge and emit no events") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    const auto before = serializeSnapshot(t.model);
    (void)t.model.events().drain();

    Uid issue = t.engine.annotate({{}, "CF1", "issue", "", Issue{8.0, {s}}});
    const auto* a = t.model.annotation(issue);
    REQUIRE(a);
    CHECK(std::get<Issue>(a->body).utilityDrop == 8.0);
    CHECK(issue.value >= kAnnotationUidBase);

    CHECK_THROWS_AS(t.engine.annotate({{}, "AS1", "strategy", "", AdaptationStrategy{1, 1, Uid{}, {}}}), ModelError);
    CHECK_THROWS_AS(t.engine.annotate({{}, "AS1", "strategy", "", AdaptationStrategy{1, 1, s, {}}}), ModelError);
    t.engine.annotate({{}, "AS1", "strategy", "", AdaptationStrategy{8, 1, issue, {s}}});
    t.engine.annotate({{}, "note", "working-data", "", WorkingData{"3", "hits", {s}}});
    CHECK(t.model.annotations().size() == 3);
    CHECK(t.model.events().drain().empty());

    t.engine.clearAnnotations();
    CHECK(t.model.annotations().empty());
    // the next uid was consumed by the annotations only
    auto after = serializeSnapshot(t.model);
    CHECK(after.substr(after.find("\"interface_types\"")) == before.substr(before.find("\"interface_types\"")));
}

TEST_CASE("queries") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    Uid r = t.started(t.relay, t.shopA);
    Uid c1 = t.started(t.client, t.shopA);
    Uid c2 = t.started(t.client, t.shopA);
    t.sim.connect(t.req(c1), t.prov(r));
    t.sim.connect(t.req(c2), t.prov(r));
    t.sim.connect(t.req(r), t.prov(s));
    CHECK(t.model.connectivity(r) == 3);
    CHECK(t.model.componentsOfType(t.odd).empty());
    CHECK(t.model.componentsOfType(t.client).size() == 2);
    CHECK(t.model.tenantOf(c1) == t.shopA);
    CHECK(t.model.findByUid(c1) == ElementKind::Component);
    CHECK(t.model.findByUid(t.req(c1)) == ElementKind::RequiredInterface);
    t.sim.removeComponent(c1);
    CHECK_FALSE(t.model.findByUid(c1).has_value());
    CHECK_FALSE(t.model.tenantOf(c1).has_value());
    CHECK_FALSE(t.model.connectedProvider(Uid{123456}).has_value());
}

TEST_CASE("a self-loop counts on both ends") {
    Tiny t;
    Uid r = t.started(t.relay, t.shopA);
    t.sim.connect(t.req(r), t.prov(r));
    CHECK(t.model.connectivity(r) == 2);
}

TEST_CASE("replacing a removed component by an identical one restores connectivity") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    Uid r = t.started(t.relay, t.shopA);
    Uid c = t.started(t.client, t.shopA);
    t.sim.connect(t.req(r), t.prov(s));
    t.sim.connect(t.req(c), t.prov(r));
    const auto before = t.model.connectivity(r);
    t.engine.removeComponent(r);
    Uid n = t.engine.instantiate(t.relay, t.shopA);
    t.engine.connect(t.req(n), t.prov(s));
    t.engine.connect(t.req(c), t.prov(n));
    CHECK(t.model.connectivity(n) == before);
    CHECK(n != r);
}

TEST_CASE("random operation sequences keep the model consistent") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CAPTURE(seed);
        Tiny t;
        std::mt19937_64 rng(seed);
        const Uid types[] = {t.server, t.client, t.relay, t.odd};
        const Uid tenants[] = {t.shopA, t.shopB};
        std::size_t accepted = 0;
        std::size_t expectedEvents = 0;
        std::size_t drained = 0;
        std::uint64_t lastStamp = 0;
        auto pickComponent = [&]() -> std::optional<Uid> {
            auto all = t.model.components();
            if (all.empty()) return std::nullopt;
            return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)]->uid;
        };
        for (int step = 0; step < 300; ++step) {
            const int op = std::uniform_int_distribution<int>(0, 5)(rng);
            ModelHandle& h = (rng() & 1) ? t.engine : t.sim;
            try {
                switch (op) {
                    case 0: {
                        const Uid c = h.instantiate(types[rng() % 4], tenants[rng() % 2]);
                        expectedEvents += 1;
                        (void)c;
                        break;
                    }
                    case 1: {
                        auto c = pickComponent();
                        if (!c) continue;
                        const ComponentState s = static_cast<ComponentState>(rng() % 4);
                        h.setState(*c, s);
                        expectedEvents += 1;
                        break;
                    }
                    case 2: {
                        auto c = pickComponent();
                        if (!c) continue;
                        const std::size_t attached = t.model.connectivity(*c);
                        std::set<Uid> distinct;
                        for (const auto& r : t.get(*c).required) if (r.connector) distinct.insert(*r.connector);
                        for (const auto& p : t.get(*c).provided) distinct.insert(p.connectors.begin(), p.connectors.end());
                        (void)attached;
                        h.removeComponent(*c);
                        expectedEvents += distinct.size() + 1;
                        break;
                    }
                    case 3:
                    case 4: {
                        auto a = pickComponent();
                        auto b = pickComponent();
                        if (!a || !b || t.get(*a).required.empty() || t.get(*b).provided.empty()) continue;
                        h.connect(t.req(*a), t.prov(*b));
                        expectedEvents += 1;
                        break;
                    }
                    case 5: {
                        auto all = t.model.connectors();
                        if (all.empty()) continue;
                        h.disconnect(all[rng() % all.size()]->uid);
                        expectedEvents += 1;
                        break;
                    }
                }
                ++accepted;
            } catch (const ModelError&) {
                // rejected calls must not change anything
            }
            if (step % 37 == 0) {
                for (const auto& e : t.model.events().drain()) {
                    CHECK(e.timestamp > lastStamp);
                    lastStamp = e.timestamp;
                    const auto& keys = oracle::payloadKeys().at(std::string(toString(e.kind)));
                    std::set<std::string> got;
                    for (const auto& [k, v] : e.payload) got.insert(k);
                    CHECK(got == keys);
                    ++drained;
                }
            }
        }
        drained += t.model.events().drain().size();
        CHECK(drained == expectedEvents);
        CHECK(t.model.events().emittedCount() >= drained);

        std::set<Uid> uids;
        std::size_t elements = 0;
        for (const auto& tenant : t.model.tenants()) {
            ++elements, uids.insert(tenant.uid);
            for (const Component* c : t.model.componentsOf(tenant.uid)) {
                ++elements, uids.insert(c->uid);
                for (const auto& p : c->parameters) ++elements, uids.insert(p.uid);
                for (const auto& r : c->required) ++elements, uids.insert(r.uid);
                for (const auto& p : c->provided) ++elements, uids.insert(p.uid);
            }
        }
        for (const auto* k : t.model.connectors()) {
            ++elements, uids.insert(k->uid);
            const auto* src = t.model.requiredInterface(k->source);
            const auto* dst = t.model.providedInterface(k->target);
            REQUIRE(src);
            REQUIRE(dst);
            CHECK(src->type == dst->type);
            CHECK(t.model.tenantOf(src->component) == t.model.tenantOf(dst->component));
        }
        CHECK(uids.size() == elements);
        CHECK(accepted > 0);
    }
}

TEST_CASE("snapshots round-trip byte-identically") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    Uid r = t.started(t.relay, t.shopA);
    Uid c = t.started(t.client, t.shopB);
    (void)c;
    t.sim.connect(t.req(r), t.prov(s));
    t.sim.connect(t.req(t.started(t.client, t.shopA)), t.prov(r));
    t.sim.recordException(t.prov(s), t.put, "E", "a,b;c=d\nnext", "trace");
    t.sim.updatePerformanceStats(t.prov(r), t.put, {0.5, 3.25, 17.75, 9});
    t.sim.setMonitoredProperty(t.shopA, "search-response-time", "d", DataType::Real, "ms", "42.5");
    t.engine.setParameter(t.get(s).parameters[0].uid, "13");
    Uid issue = t.engine.annotate({{}, "CF2", "issue", "x", Issue{1.5, {s}}});
    t.engine.annotate({{}, "AS2", "strategy", "", AdaptationStrategy{1.5, 2, issue, {s}}});
    t.engine.annotate({{}, "memo", "working-data", "", WorkingData{"7.25", "ms", {t.shopA, t.relay}}});
    t.sim.setState(s, ComponentState::Unknown);

    const auto first = serializeSnapshot(t.model);
    auto parsed = parseSnapshot(first);
    CHECK(serializeSnapshot(parsed) == first);
    CHECK(parsed.nextUid() == t.model.nextUid());
    CHECK(parsed.componentCount() == t.model.componentCount());
    CHECK(parsed.events().clock() == t.model.events().clock());
    CHECK(parsed.exceptionCount(s) == 1);
    CHECK(oracle::healingUtility(first, 5) == oracle::healingUtility(serializeSnapshot(parsed), 5));

    // the parsed model keeps working and allocates fresh uids
    ModelHandle h(Role::Engine, parsed);
    Uid n = h.instantiate(t.client, t.shopB);
    CHECK(n.value == t.model.nextUid());
}

TEST_CASE("malformed snapshots are rejected") {
    CHECK_THROWS_AS(parseSnapshot("not json"), ModelError);
    CHECK_THROWS_AS(parseSnapshot("{}"), ModelError);
    CHECK_THROWS_AS(parseSnapshot(R"({"format":"other"})"), ModelError);
    Tiny t;
    t.started(t.server, t.shopA);
    auto text = serializeSnapshot(t.model);
    auto pos = text.find("\"next_uid\"");
    auto end = text.find(',', pos);
    auto broken = text.substr(0, pos) + "\"next_uid\": 1" + text.substr(end);
    CHECK_THROWS_AS(parseSnapshot(broken), ModelError);
}
