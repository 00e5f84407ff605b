#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrubis/comparch/architecture.hpp"
#include "mrubis/shop/blueprint.hpp"

namespace mrubis::shop {

using comparch::Architecture;
using comparch::Component;
using comparch::Uid;

/// Tenant-level monitored property holding the search response time in ms.
inline constexpr const char* kResponseTimeProperty = "search-response-time";

/// Blueprint bound to the type uids of one model.
class ShopCatalog {
public:
    /// Throws comparch::ModelError when a blueprint type or interface is missing.
    static ShopCatalog bind(const Architecture& model, const ShopBlueprint& blueprint);

    [[nodiscard]] const ShopBlueprint& blueprint() const { return blueprint_; }
    [[nodiscard]] std::size_t slotCount() const { return primary_.size(); }
    [[nodiscard]] const SlotSpec& slot(std::size_t index) const { return blueprint_.slots[index]; }
    [[nodiscard]] Uid primaryType(std::size_t slot) const { return primary_[slot]; }
    [[nodiscard]] Uid alternativeType(std::size_t slot) const { return alternative_[slot]; }
    /// The other type of the same slot.
    [[nodiscard]] Uid alternativeOf(Uid type) const;
    [[nodiscard]] std::optional<std::size_t> slotOf(Uid componentType) const;
    [[nodiscard]] bool isFilterType(Uid componentType) const;
    [[nodiscard]] std::size_t headSlot() const { return head_; }
    [[nodiscard]] std::size_t sinkSlot() const { return sink_; }
    [[nodiscard]] Uid filterInterface() const { return filterInterface_; }
    [[nodiscard]] Uid filterMethod() const { return filterMethod_; }
    [[nodiscard]] std::vector<std::size_t> filterSlots() const;

private:
    ShopBlueprint blueprint_;
    std::vector<Uid> primary_;
    std::vector<Uid> alternative_;
    std::unordered_map<Uid, std::size_t> slotByType_;
    std::size_t head_ = 0;
    std::size_t sink_ = 0;
    Uid filterInterface_;
    Uid filterMethod_;
};

/// The pipe of one shop as currently wired, head to sink.
struct PipeView {
    Uid tenant;
    const Component* head = nullptr;
    const Component* sink = nullptr;
    std::vector<const Component*> filters;  // front first
    bool intact = false;
    std::string problem;  // set when not intact
};

/// Follows the filter connectors from the head; stops at the first gap or cycle.
PipeView tracePipe(const Architecture& model, const ShopCatalog& catalog, Uid tenant);

/// Required / provided filter interface of a component, if it has one.
const comparch::RequiredInterface* filterRequired(const Architecture& model, const ShopCatalog& catalog,
                                                  const Component& component);
const comparch::ProvidedInterface* filterProvided(const Architecture& model, const ShopCatalog& catalog,
                                                  const Component& component);

/// Average filter time from the component's PerformanceStats.
std::optional<double> filterAverage(const Architecture& model, const ShopCatalog& catalog, const Component& filter);

/// Averages of the pipe filters in chain order; filters without stats are skipped.
std::vector<double> pipeAverages(const Architecture& model, const ShopCatalog& catalog, const PipeView& pipe);

/// base + sum of the averages, summed front to back.
double responseTime(double base, std::span<const double> averages);

/// Response time after inserting `average` at its sorted position (after equal values).
double projectedWithInsert(double base, std::span<const double> averages, double average);

/// Positions that are out of order: the complement of the longest
/// non-decreasing subsequence. Among equally long subsequences the one with
/// the lexicographically smallest values is kept.
std::vector<std::size_t> misplacedPositions(std::span<const double> averages);

/// Slots of the tenant that currently have no component.
std::vector<std::size_t> missingSlots(const Architecture& model, const ShopCatalog& catalog, Uid tenant);

/// Provider a required interface should be wired to: the unique provided
/// interface of the same type in the tenant, otherwise the unique one
/// without incoming connectors. The requiring component itself is never chosen.
std::optional<Uid> resolveProvider(const Architecture& model, Uid requiredInterface);

/// Same rule for an interface type; `excludeComponent` is never chosen.
std::optional<Uid> resolveProvider(const Architecture& model, Uid tenant, Uid interfaceType,
                                   std::optional<Uid> excludeComponent);

}  // namespace mrubis::shop
