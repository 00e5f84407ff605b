#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mrubis/comparch/architecture.hpp"

namespace mrubis::shop {

struct InterfaceSpec {
    std::string fqName;
    std::vector<std::string> methods;
};

/// One of the components every shop consists of.
struct SlotSpec {
    std::string name;
    /// Functionally equivalent type used when a component has to be replaced by a different type.
    std::string alternativeName;
    double criticality = 1.0;
    bool filter = false;
    std::vector<comparch::ParameterTypeSpec> parameters;
    std::vector<std::string> required;  // interface fqNames
    std::vector<std::string> provided;
};

/// Architecture template of one shop (tenant).
///
/// Services are wired by interface type: each service interface has exactly
/// one provider per shop. The pipe of filters is a chain over the filter
/// interface: the head requires it, every filter provides and requires it,
/// and the sink provides it. Items flow from the head towards the sink, so
/// the first filter after the head is the front of the pipe.
struct ShopBlueprint {
    std::vector<InterfaceSpec> interfaces;
    std::vector<SlotSpec> slots;
    std::string filterInterface;
    std::string pipeHead;  // slot name
    std::string pipeSink;  // slot name

    [[nodiscard]] std::size_t filterCount() const;
};

/// The mRUBiS shop: 8 services and a pipe of 10 filters, 18 components in total.
const ShopBlueprint& standardBlueprint();

}  // namespace mrubis::shop
