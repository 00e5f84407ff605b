#include "mrubis/shop/blueprint.hpp"

#include <algorithm>

namespace mrubis::shop {

namespace {

using comparch::DataType;

constexpr const char* kPersistence = "de.mdelab.mrubis.IPersistence";
constexpr const char* kQuery = "de.mdelab.mrubis.IQuery";
constexpr const char* kAuthentication = "de.mdelab.mrubis.IAuthentication";
constexpr const char* kUserManagement = "de.mdelab.mrubis.IUserManagement";
constexpr const char* kItemManagement = "de.mdelab.mrubis.IItemManagement";
constexpr const char* kInventory = "de.mdelab.mrubis.IInventory";
constexpr const char* kReputation = "de.mdelab.mrubis.IReputation";
constexpr const char* kBidAndBuy = "de.mdelab.mrubis.IBidAndBuy";
constexpr const char* kItemFilter = "de.mdelab.mrubis.IItemFilter";

SlotSpec service(std::string name, double criticality, std::vector<std::string> required,
                 std::vector<std::string> provided) {
    SlotSpec s;
    s.alternativeName = name + " (Alternative)";
    s.name = std::move(name);
    s.criticality = criticality;
    s.parameters = {{"maxThreads", DataType::Int, "16"}, {"cacheEnabled", DataType::Bool, "true"}};
    s.required = std::move(required);
    s.provided = std::move(provided);
    return s;
}

SlotSpec filter(std::string name, double criticality) {
    SlotSpec s;
    s.alternativeName = name + " (Alternative)";
    s.name = std::move(name);
    s.criticality = criticality;
    s.filter = true;
    s.parameters = {{"maxItems", DataType::Int, "100"}, {"strictness", DataType::Real, "0.5"}};
    s.required = {kItemFilter};
    s.provided = {kItemFilter};
    return s;
}

ShopBlueprint makeStandard() {
    ShopBlueprint bp;
    bp.interfaces = {
        {kPersistence, {"store(Object)", "load(String)", "delete(String)"}},
        {kQuery, {"search(String)"}},
        {kAuthentication, {"login(String,String)", "logout(String)", "checkSession(String)"}},
        {kUserManagement, {"getUser(String)", "registerUser(User)", "updateUser(User)"}},
        {kItemManagement, {"getItem(String)", "addItem(Item)", "updateItem(Item)"}},
        {kInventory, {"stock(String)", "reserve(String,int)"}},
        {kReputation, {"rate(String,int)", "getRating(String)"}},
        {kBidAndBuy, {"bid(String,double)", "buy(String)"}},
        {kItemFilter, {"filter(List)"}},
    };
    bp.filterInterface = kItemFilter;
    bp.pipeHead = "Query Service";
    bp.pipeSink = "Item Management Service";
    bp.slots = {
        service("Persistence Service", 8, {}, {kPersistence}),
        service("Query Service", 7, {kPersistence, kItemFilter}, {kQuery}),
        service("Authentication Service", 7, {kPersistence}, {kAuthentication}),
        service("User Management Service", 5, {kPersistence, kAuthentication}, {kUserManagement}),
        service("Item Management Service", 6, {kPersistence, kQuery, kInventory}, {kItemManagement, kItemFilter}),
        service("Inventory Service", 4, {kPersistence}, {kInventory}),
        service("Reputation Service", 3, {kPersistence, kUserManagement}, {kReputation}),
        service("Bid and Buy Service", 6, {kItemManagement, kUserManagement, kInventory, kAuthentication, kReputation},
                {kBidAndBuy}),
        filter("Category Filter", 3),
        filter("Region Filter", 2),
        filter("Price Range Filter", 3),
        filter("Seller Rating Filter", 2),
        filter("Availability Filter", 3),
        filter("Shipping Filter", 1),
        filter("Condition Filter", 1),
        filter("Keyword Filter", 2),
        filter("Recommendation Filter", 1),
        filter("Personalization Filter", 2),
    };
    return bp;
}

}  // namespace

std::size_t ShopBlueprint::filterCount() const {
    return static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(), [](const SlotSpec& s) { return s.filter; }));
}

const ShopBlueprint& standardBlueprint() {
    static const ShopBlueprint bp = makeStandard();
    return bp;
}

}  // namespace mrubis::shop
