#pragma once

#include "mrubis/comparch/architecture.hpp"
#include "mrubis/comparch/model_handle.hpp"
#include "support/printers.hpp"

namespace fixture {

using namespace mrubis::comparch;

/// Two tenants and a handful of small types.
///   Server: provides IStore, reliability 0.75, criticality 4, params size:int=8, fast:bool=true
///   Client: requires IStore, reliability 0.5, criticality 2
///   Relay:  requires and provides IStore, reliability 0.8, criticality 5
///   Odd:    requires IOther, reliability 1, criticality 1
struct Tiny {
    Architecture model{"tiny"};
    Uid store;
    Uid other;
    Uid put;  // method of IStore
    Uid server;
    Uid client;
    Uid relay;
    Uid odd;
    Uid shopA;
    Uid shopB;
    ModelHandle sim{Role::Simulator, model};
    ModelHandle engine{Role::Engine, model};

    Tiny() {
        store = model.addInterfaceType("t.IStore", {"put(String)", "get(String)"});
        other = model.addInterfaceType("t.IOther", {"ping()"});
        put = model.interfaceType(store)->methods.front().uid;
        server = model.addComponentType({"Server", 0.75, 4.0,
                                         {{"size", DataType::Int, "8"}, {"fast", DataType::Bool, "true"}}, {}, {store}});
        client = model.addComponentType({"Client", 0.5, 2.0, {}, {store}, {}});
        relay = model.addComponentType({"Relay", 0.8, 5.0, {}, {store}, {store}});
        odd = model.addComponentType({"Odd", 1.0, 1.0, {}, {other}, {}});
        shopA = model.addTenant("a");
        shopB = model.addTenant("b");
        model.seal();
    }

    const Component& get(Uid c) const { return *model.component(c); }
    Uid req(Uid c, std::size_t i = 0) const { return get(c).required.at(i).uid; }
    Uid prov(Uid c, std::size_t i = 0) const { return get(c).provided.at(i).uid; }

    Uid started(Uid type, Uid tenant) {
        Uid c = sim.instantiate(type, tenant);
        sim.setState(c, ComponentState::Deployed);
        sim.setState(c, ComponentState::Started);
        return c;
    }
};

}  // namespace fixture
