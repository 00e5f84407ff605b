#include <doctest.h>

#include <algorithm>

#include "mrubis/comparch/errors.hpp"
#include "support/fixtures.hpp"

using namespace mrubis::comparch;
using fixture::Tiny;

TEST_CASE("drain delivers each event exactly once") {
    Tiny t;
    (void)t.model.events().drain();
    CHECK(t.model.events().drain().empty());
    Uid c = t.sim.instantiate(t.client, t.shopA);
    auto first = t.model.events().drain();
    REQUIRE(first.size() == 1);
    CHECK(first[0].subject == c);
    CHECK(t.model.events().drain().empty());
    CHECK(t.model.events().pending() == 0);
}

TEST_CASE("removing a component with two connectors yields three events") {
    Tiny t;
    Uid s = t.started(t.server, t.shopA);
    Uid r = t.started(t.relay, t.shopA);
    Uid c = t.started(t.client, t.shopA);
    t.sim.connect(t.req(r), t.prov(s));
    t.sim.connect(t.req(c), t.prov(r));
    (void)t.model.events().drain();
    t.sim.removeComponent(r);
    auto events = t.model.events().drain();
    REQUIRE(events.size() == 3);
    CHECK(events[0].kind == ChangeEventKind::ConnectorRemoved);
    CHECK(events[1].kind == ChangeEventKind::ConnectorRemoved);
    CHECK(events[2].kind == ChangeEventKind::ComponentRemoved);
    CHECK(events[2].subject == r);
}

TEST_CASE("timestamps increase with every emission") {
    ChangeEventQueue q;
    q.emit(ChangeEventKind::ComponentAdded, Uid{1}, {});
    q.emit(ChangeEventKind::ComponentAdded, Uid{2}, {});
    auto events = q.drain();
    REQUIRE(events.size() == 2);
    CHECK(events[0].timestamp < events[1].timestamp);
    CHECK(q.emittedCount() == 2);
}

TEST_CASE("events carry the simulation origin") {
    ChangeEventQueue q;
    q.setOrigin(4, 3);
    q.emit(ChangeEventKind::ConnectorAdded, Uid{9}, {{"source", "1"}});
    auto e = q.drain().at(0);
    CHECK(e.round == 4);
    CHECK(e.step == 3);
    CHECK(e.get("source") == "1");
    CHECK(e.getUid("source") == Uid{1});
    CHECK_FALSE(e.get("missing").has_value());
}

TEST_CASE("event kinds have stable names") {
    CHECK(kChangeEventKindCount == 11);
    for (std::size_t i = 0; i < kChangeEventKindCount; ++i) {
        auto kind = static_cast<ChangeEventKind>(i);
        CHECK(parseChangeEventKind(toString(kind)) == kind);
    }
    CHECK_FALSE(parseChangeEventKind("Nope").has_value());
}

TEST_CASE("event log lines escape separators") {
    ChangeEvent e{ChangeEventKind::ParameterValueChanged, 7, Uid{12}, {{"old", "a,b"}, {"new", "x=y;z\n"}}, 2, 3};
    const auto line = formatEventLine(e);
    CHECK(line.rfind("2,3,7,ParameterValueChanged,12,", 0) == 0);
    CHECK(line.find('\n') == std::string::npos);
    // exactly five field separators survive
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
}
