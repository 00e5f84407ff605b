#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "mrubis/comparch/errors.hpp"
#include "mrubis/comparch/snapshot.hpp"
#include "mrubis/shop/generator.hpp"
#include "mrubis/shop/injection.hpp"
#include "mrubis/shop/utility.hpp"
#include "mrubis/shop/validators.hpp"
#include "support/hand_shop.hpp"
#include "support/oracles.hpp"
#include "support/printers.hpp"

using namespace mrubis;
using namespace mrubis::comparch;
using namespace mrubis::shop;
using sim::IssueKind;

namespace {

struct Shops {
    Thresholds thresholds;
    sim::Rng rng;
    Architecture model;
    std::shared_ptr<const ShopCatalog> catalog;
    ModelHandle sim;
    std::shared_ptr<InjectionHistory> history = std::make_shared<InjectionHistory>();
    std::shared_ptr<PipeWorld> world = std::make_shared<PipeWorld>();

    explicit Shops(int shops, std::uint64_t seed = 3)
        : rng(seed),
          model(generateModel(shops, standardBlueprint(), thresholds, rng)),
          catalog(std::make_shared<const ShopCatalog>(ShopCatalog::bind(model, standardBlueprint()))),
          sim(Role::Simulator, model) {
        world->observe(model, *catalog);
    }

    Uid tenant(std::size_t i = 0) const { return model.tenants().at(i).uid; }

    std::vector<Violation> violations() {
        std::vector<Violation> out;
        ArchitectureValidator a;
        SelfHealingValidator h(catalog, thresholds);
        SelfOptimizationValidator o(catalog, thresholds, world);
        for (sim::Validator* v : std::initializer_list<sim::Validator*>{&a, &h, &o}) {
            auto found = v->validate(sim);
            out.insert(out.end(), found.begin(), found.end());
        }
        return out;
    }

    void inject(IssueKind kind, Uid target) {
        if (kind <= IssueKind::CF5) {
            CriticalFailureInjector(kind, thresholds, history).inject(sim, target, rng);
        } else {
            PerformanceIssueInjector(kind, catalog, thresholds, world).inject(sim, target, rng);
        }
    }

    const Component* filterAt(Uid t, std::size_t position) const {
        return tracePipe(model, *catalog, t).filters.at(position);
    }
};

std::size_t countCode(const std::vector<Violation>& vs, std::string_view code) {
    return static_cast<std::size_t>(std::count_if(vs.begin(), vs.end(), [&](const auto& v) { return v.code == code; }));
}

}  // namespace

TEST_CASE("thresholds validation") {
    CHECK_NOTHROW(Thresholds{}.validate());
    Thresholds t;
    t.responseTimeLowerMs = 250;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.baseQueryTimeMs = -1;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.cf2ExceptionThreshold = 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("standard blueprint") {
    const auto& bp = standardBlueprint();
    CHECK(bp.slots.size() == 18);
    CHECK(bp.filterCount() == 10);
    std::set<std::string> names;
    for (const auto& s : bp.slots) {
        names.insert(s.name);
        names.insert(s.alternativeName);
        CHECK(s.criticality > 0);
    }
    CHECK(names.size() == 36);
}

TEST_CASE("generated shops are complete, healthy and sorted") {
    for (int shops : {1, 4}) {
        Shops s(shops);
        CHECK(s.model.componentCount() == static_cast<std::size_t>(18 * shops));
        CHECK(s.model.tenants().size() == static_cast<std::size_t>(shops));
        CHECK(s.model.events().pending() == 0);
        CHECK(s.violations().empty());
        for (const auto& t : s.model.tenants()) {
            auto pipe = tracePipe(s.model, *s.catalog, t.uid);
            REQUIRE(pipe.intact);
            CHECK(pipe.filters.size() == 10);
            auto averages = pipeAverages(s.model, *s.catalog, pipe);
            CHECK(averages.size() == 10);
            CHECK(std::is_sorted(averages.begin(), averages.end()));
            CHECK(std::adjacent_find(averages.begin(), averages.end()) == averages.end());
            CHECK(averages.front() >= 4.0);
            CHECK(averages.back() <= 16.0);
            auto rt = responseTimeProperty(s.model, t.uid);
            REQUIRE(rt);
            CHECK(*rt == doctest::Approx(responseTime(s.thresholds.baseQueryTimeMs, averages)));
            for (const Component* c : s.model.componentsOf(t.uid)) {
                CHECK(c->state == ComponentState::Started);
                const auto* type = s.model.componentType(c->type);
                CHECK(type->reliability > 0.9);
                CHECK(type->reliability < 1.0);
            }
        }
        CHECK(selfHealingUtility(s.model, s.thresholds) ==
              doctest::Approx(oracle::healingUtility(serializeSnapshot(s.model), s.thresholds.cf2ExceptionThreshold))
                  .epsilon(1e-12));
        CHECK(selfOptimizationUtility(s.model, *s.catalog, s.thresholds) ==
              doctest::Approx(selfHealingUtility(s.model, s.thresholds)).epsilon(1e-12));
    }
}

TEST_CASE("generation is reproducible") {
    Shops a(3, 99);
    Shops b(3, 99);
    Shops c(3, 100);
    CHECK(serializeSnapshot(a.model) == serializeSnapshot(b.model));
    CHECK(serializeSnapshot(a.model) != serializeSnapshot(c.model));
}

TEST_CASE("alternative types mirror their primary") {
    Shops s(1);
    for (std::size_t i = 0; i < s.catalog->slotCount(); ++i) {
        const auto* p = s.model.componentType(s.catalog->primaryType(i));
        const auto* a = s.model.componentType(s.catalog->alternativeType(i));
        CHECK(p->reliability == a->reliability);
        CHECK(p->criticality == a->criticality);
        CHECK(p->requiredInterfaceTypes == a->requiredInterfaceTypes);
        CHECK(p->providedInterfaceTypes == a->providedInterfaceTypes);
        CHECK(s.catalog->alternativeOf(p->uid) == a->uid);
        CHECK(s.catalog->alternativeOf(a->uid) == p->uid);
    }
}

TEST_CASE("misplaced positions match an exhaustive search") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 11)(rng);
        std::vector<double> values;
        for (std::size_t i = 0; i < n; ++i) values.push_back(std::uniform_int_distribution<int>(1, 6)(rng));
        auto misplaced = misplacedPositions(values);
        CHECK(misplaced.size() == oracle::misplacedCount(values));
        std::vector<double> kept;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::binary_search(misplaced.begin(), misplaced.end(), i)) kept.push_back(values[i]);
        }
        CHECK(std::is_sorted(kept.begin(), kept.end()));
    }
    CHECK(misplacedPositions(std::vector<double>{3, 1, 2}) == std::vector<std::size_t>{0});
    CHECK(misplacedPositions(std::vector<double>{1, 5, 2, 3}) == std::vector<std::size_t>{1});
}

TEST_CASE("projected response time") {
    const std::vector<double> averages{4, 6, 9};
    CHECK(responseTime(20, averages) == 39);
    CHECK(projectedWithInsert(20, averages, 5) == 44);
    CHECK(projectedWithInsert(20, {}, 5) == 25);
}

TEST_CASE("optimization utility of a hand-made shop") {
    fixture::HandShop s;
    s.setAverages(4, 8);
    CHECK(selfHealingUtility(s.model, s.thresholds) == 100.0);
    CHECK(s.utility() == 100.0);  // ordered, goal met

    s.setAverages(15, 10);
    CHECK(s.utility() == doctest::Approx(95.0).epsilon(1e-12));  // X misplaced, goal met

    s.setAverages(150, 100);
    CHECK(s.utility() == doctest::Approx(76.0).epsilon(1e-12));  // X misplaced, 270 ms over 200

    s.setAverages(100, 150);
    CHECK(s.utility() == doctest::Approx(80.0).epsilon(1e-12));  // ordered, goal violated
}

TEST_CASE("penalties only affect the shop they belong to") {
    Shops s(2);
    const double before = shopOptimizationUtility(s.model, *s.catalog, s.tenant(1), s.thresholds);
    s.inject(IssueKind::PI2, s.tenant(0));
    CHECK(shopOptimizationUtility(s.model, *s.catalog, s.tenant(1), s.thresholds) == before);
    CHECK(shopOptimizationUtility(s.model, *s.catalog, s.tenant(0), s.thresholds) <
          tenantUtility(s.model, s.tenant(0), s.thresholds));
}

TEST_CASE("each further misplaced filter never raises the utility") {
    Shops s(1, 8);
    const Uid t = s.tenant();
    double previous = selfOptimizationUtility(s.model, *s.catalog, s.thresholds);
    std::size_t misplacedBefore = 0;
    for (std::size_t i = 0; i + 1 < 10; ++i) {
        const Component* f = s.filterAt(t, i);
        // slower than every original filter, faster than the ones slowed down before
        const double slow = 100.0 - static_cast<double>(i);
        s.sim.updatePerformanceStats(filterProvided(s.model, *s.catalog, *f)->uid, s.catalog->filterMethod(),
                                     {slow / 2, slow * 2, slow * 100, 100});
        refreshResponseTime(s.sim, *s.catalog, t, s.thresholds);
        const auto misplaced = misplacedPositions(pipeAverages(s.model, *s.catalog, tracePipe(s.model, *s.catalog, t)));
        CHECK(misplaced.size() >= misplacedBefore);
        misplacedBefore = misplaced.size();
        const double now = selfOptimizationUtility(s.model, *s.catalog, s.thresholds);
        CHECK(now <= previous);
        previous = now;
    }
    CHECK(misplacedBefore == 9);
}

TEST_CASE("CF1 crashes the component") {
    Shops s(1);
    const Uid c = s.model.componentsOf(s.tenant())[2]->uid;
    const double before = selfHealingUtility(s.model, s.thresholds);
    const double own = componentUtility(s.model, *s.model.component(c));
    s.inject(IssueKind::CF1, c);
    CHECK(s.model.component(c)->state == ComponentState::Unknown);
    CHECK(s.history->hits(c) == 1);
    CHECK(s.history->lastKind(c) == IssueKind::CF1);
    CHECK(selfHealingUtility(s.model, s.thresholds) == doctest::Approx(before - own));
    auto vs = s.violations();
    CHECK(countCode(vs, "component-unknown") == 1);
}

TEST_CASE("CF2 raises one exception above the threshold") {
    Shops s(1);
    const Uid c = s.model.componentsOf(s.tenant())[0]->uid;
    s.inject(IssueKind::CF2, c);
    auto events = s.model.events().drain();
    CHECK(events.size() == static_cast<std::size_t>(s.thresholds.cf2ExceptionThreshold + 1));
    for (const auto& e : events) {
        CHECK(e.kind == ChangeEventKind::ExceptionOccurred);
        CHECK(e.get("component") == std::to_string(c.value));
    }
    CHECK(s.model.exceptionCount(c) == static_cast<std::size_t>(s.thresholds.cf2ExceptionThreshold + 1));
    CHECK(failed(s.model, *s.model.component(c), s.thresholds));
    CHECK(countCode(s.violations(), "exceptions-over-threshold") == 1);
    CHECK(s.history->lastKind(c) == IssueKind::CF2);
}

TEST_CASE("CF3 removes the component and all of its connectors") {
    Shops s(1);
    const Component* victim = s.filterAt(s.tenant(), 3);
    const Uid c = victim->uid;
    const auto k = s.model.connectivity(c);
    REQUIRE(k == 2);
    s.inject(IssueKind::CF3, c);
    auto events = s.model.events().drain();
    CHECK(events.size() == k + 1);
    CHECK(events.back().kind == ChangeEventKind::ComponentRemoved);
    CHECK(s.model.componentCount() == 17);
    auto vs = s.violations();
    CHECK(countCode(vs, "missing-component") == 1);
    CHECK(countCode(vs, "pipe-broken") == 1);
}

TEST_CASE("CF4 repeats the previous failure") {
    Shops s(1);
    const Uid crashed = s.model.componentsOf(s.tenant())[1]->uid;
    const Uid throwing = s.model.componentsOf(s.tenant())[4]->uid;
    s.inject(IssueKind::CF2, throwing);
    s.inject(IssueKind::CF1, crashed);
    ModelHandle engine(Role::Engine, s.model);
    engine.setState(crashed, ComponentState::Deployed);
    engine.setState(crashed, ComponentState::Started);
    (void)s.model.events().drain();
    s.inject(IssueKind::CF4, crashed);
    CHECK(s.model.component(crashed)->state == ComponentState::Unknown);
    s.inject(IssueKind::CF4, throwing);
    auto events = s.model.events().drain();
    CHECK(std::count_if(events.begin(), events.end(),
                        [](const auto& e) { return e.kind == ChangeEventKind::ExceptionOccurred; }) ==
          s.thresholds.cf2ExceptionThreshold + 1);
}

TEST_CASE("CF5 removes one connector") {
    Shops s(1);
    const Connector* k = s.model.connectors().front();
    const Uid source = *s.model.interfaceOwner(k->source);
    const Uid target = *s.model.interfaceOwner(k->target);
    const auto cs = s.model.connectivity(source);
    const auto ct = s.model.connectivity(target);
    s.inject(IssueKind::CF5, k->uid);
    CHECK(s.model.connectivity(source) == cs - 1);
    CHECK(s.model.connectivity(target) == ct - 1);
    auto events = s.model.events().drain();
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ChangeEventKind::ConnectorRemoved);
    CHECK(countCode(s.violations(), "required-unconnected") == 1);
}

TEST_CASE("injectors reject targets of the wrong kind") {
    Shops s(1);
    CHECK_THROWS_AS(s.inject(IssueKind::CF5, s.model.components().front()->uid), ModelError);
    CHECK_THROWS_AS(s.inject(IssueKind::CF1, s.tenant()), ModelError);
    CHECK_THROWS_AS(s.inject(IssueKind::PI1, s.model.components().front()->uid), ModelError);
}

TEST_CASE("PI1 leaves exactly one filter out of order") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Shops s(1, seed);
        s.inject(IssueKind::PI1, s.tenant());
        auto averages = pipeAverages(s.model, *s.catalog, tracePipe(s.model, *s.catalog, s.tenant()));
        CHECK(misplacedPositions(averages).size() == 1);
        CHECK(countCode(s.violations(), "pipe-misordered") == 1);
    }
}

TEST_CASE("PI2 and PI3 push the response time across the thresholds") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Shops s(1, seed);
        s.inject(IssueKind::PI2, s.tenant());
        CHECK(*responseTimeProperty(s.model, s.tenant()) > s.thresholds.responseTimeUpperMs);
        CHECK(countCode(s.violations(), "response-time-above-upper") == 1);
        CHECK(misplacedPositions(pipeAverages(s.model, *s.catalog, tracePipe(s.model, *s.catalog, s.tenant()))).empty());

        Shops q(1, seed);
        q.inject(IssueKind::PI3, q.tenant());
        CHECK(*responseTimeProperty(q.model, q.tenant()) < q.thresholds.responseTimeLowerMs);
        // nothing was removed from the pipe, so there is nothing to add back
        CHECK(countCode(q.violations(), "response-time-below-lower") == 0);
    }
}

TEST_CASE("healing scenario offers CF4 only after repeated hits") {
    Shops s(2);
    SelfHealingScenario scenario(s.thresholds, s.history);
    std::map<IssueKind, int> seen;
    for (int round = 1; round <= 200; ++round) {
        auto injections = scenario.nextInjections(round, s.model, s.rng);
        REQUIRE(injections.size() == 1);
        ++seen[injections[0].kind];
        if (injections[0].kind == IssueKind::CF4) {
            CHECK(s.history->hits(injections[0].target) >= s.thresholds.cf4RepeatCount - 1);
        } else if (injections[0].kind == IssueKind::CF5) {
            CHECK(s.model.findByUid(injections[0].target) == ElementKind::Connector);
        } else {
            CHECK(s.model.findByUid(injections[0].target) == ElementKind::Component);
        }
        // record the hit as the injector would, without touching the model
        if (injections[0].kind == IssueKind::CF1 || injections[0].kind == IssueKind::CF2) {
            s.history->record(injections[0].target, injections[0].kind);
        }
    }
    CHECK(seen[IssueKind::CF1] > 0);
    CHECK(seen[IssueKind::CF2] > 0);
    CHECK(seen[IssueKind::CF3] > 0);
    CHECK(seen[IssueKind::CF4] > 0);
    CHECK(seen[IssueKind::CF5] > 0);
}

TEST_CASE("optimization scenario picks a tenant and a feasible issue") {
    Shops s(3);
    SelfOptimizationScenario scenario(s.catalog);
    std::set<IssueKind> kinds;
    for (int round = 1; round <= 60; ++round) {
        auto injections = scenario.nextInjections(round, s.model, s.rng);
        REQUIRE(injections.size() == 1);
        CHECK(s.model.findByUid(injections[0].target) == ElementKind::Tenant);
        kinds.insert(injections[0].kind);
    }
    // every filter is in the pipe, so PI3 is never offered
    CHECK(kinds == std::set<IssueKind>{IssueKind::PI1, IssueKind::PI2});
}

TEST_CASE("provider resolution") {
    Shops s(2);
    const Uid t = s.tenant();
    for (const Component* c : s.model.componentsOf(t)) {
        for (const auto& r : c->required) {
            if (r.type == s.catalog->filterInterface()) continue;
            auto p = resolveProvider(s.model, r.uid);
            REQUIRE(p);
            CHECK(*p == *s.model.connectedProvider(r.uid));
        }
    }
    // the filter interface has several providers; only the one nobody uses yet qualifies
    const Uid next = s.filterAt(t, 5)->uid;
    s.sim.removeComponent(s.filterAt(t, 4)->uid);
    auto spare = resolveProvider(s.model, t, s.catalog->filterInterface(), std::nullopt);
    REQUIRE(spare);
    CHECK(s.model.interfaceOwner(*spare) == next);
    CHECK_FALSE(resolveProvider(s.model, t, s.catalog->filterInterface(), next).has_value());
}
