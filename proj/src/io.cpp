#include "chorefair/io.hpp"

#include "chorefair/errors.hpp"

namespace chorefair::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const Json& member(const Json& object, const char* key, const std::string& where) {
    auto it = object.find(key);
    if (it == object.end()) fail(where, std::string("missing key \"") + key + "\"");
    return *it;
}

std::size_t as_index(const Json& value, const std::string& where) {
    if (!value.is_number_unsigned()) fail(where, "expected a non-negative integer");
    return value.get<std::size_t>();
}

} // namespace

Json parse_json(std::string_view bytes) {
    try {
        return Json::parse(bytes.begin(), bytes.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

Json to_json(const Instance& instance) {
    Json costs = Json::array();
    for (const auto& row : instance.costs()) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(to_string(c));
        costs.push_back(std::move(r));
    }
    return Json{{"agents", instance.agents()},
                {"items", instance.item_names()},
                {"costs", std::move(costs)},
                {"normalized", instance.is_normalized()}};
}

Instance instance_from_json(const Json& json) {
    if (!json.is_object()) fail("/", "expected an object");
    const std::size_t agents = as_index(member(json, "agents", "/"), "/agents");
    const Json& costs = member(json, "costs", "/");
    if (!costs.is_array()) fail("/costs", "expected an array");

    CostMatrix matrix;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        const std::string row_where = "/costs/" + std::to_string(i);
        if (!costs[i].is_array()) fail(row_where, "expected an array");
        std::vector<Rational> row;
        for (std::size_t o = 0; o < costs[i].size(); ++o) {
            const std::string where = row_where + "/" + std::to_string(o);
            if (!costs[i][o].is_string()) fail(where, "expected a \"p/q\" string");
            try {
                row.push_back(parse_rational(costs[i][o].get<std::string>()));
            } catch (const ParseError& e) {
                fail(where, e.what());
            }
        }
        matrix.push_back(std::move(row));
    }

    const ValidationReport report = validate(agents, matrix);
    if (!report.ok()) fail("/costs", report.errors.front());

    std::vector<std::string> names;
    if (auto it = json.find("items"); it != json.end()) {
        if (!it->is_array()) fail("/items", "expected an array");
        for (std::size_t o = 0; o < it->size(); ++o) {
            if (!(*it)[o].is_string()) fail("/items/" + std::to_string(o), "expected a string");
            names.push_back((*it)[o].get<std::string>());
        }
    }
    const std::size_t items = matrix.empty() ? names.size() : matrix.front().size();
    if (!names.empty() && names.size() != items) {
        fail("/items", "expected " + std::to_string(items) + " names");
    }

    Instance instance = agents == 0 ? Instance(0, items) : Instance(std::move(matrix), std::move(names));
    if (auto it = json.find("normalized"); it != json.end()) {
        if (!it->is_boolean()) fail("/normalized", "expected a boolean");
        if (it->get<bool>() != instance.is_normalized()) {
            fail("/normalized", "flag disagrees with the cost matrix");
        }
    }
    return instance;
}

Json to_json(const Allocation& allocation) {
    return Json{{"bundles", allocation.bundles()}};
}

Allocation allocation_from_json(const Json& json, std::optional<std::size_t> items) {
    if (!json.is_object()) fail("/", "expected an object");
    const Json& bundles = member(json, "bundles", "/");
    if (!bundles.is_array()) fail("/bundles", "expected an array");

    std::vector<std::vector<ItemId>> result;
    std::vector<std::optional<std::size_t>> owner;
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        const std::string bundle_where = "/bundles/" + std::to_string(i);
        if (!bundles[i].is_array()) fail(bundle_where, "expected an array");
        std::vector<ItemId> bundle;
        for (std::size_t k = 0; k < bundles[i].size(); ++k) {
            const std::string where = bundle_where + "/" + std::to_string(k);
            const std::size_t o = as_index(bundles[i][k], where);
            if (items && o >= *items) {
                fail(where, "item " + std::to_string(o) + " out of range (m=" +
                                std::to_string(*items) + ")");
            }
            if (o >= owner.size()) owner.resize(o + 1);
            if (owner[o]) fail(where, "item " + std::to_string(o) + " assigned twice");
            owner[o] = i;
            bundle.push_back(o);
        }
        result.push_back(std::move(bundle));
    }
    if (items) {
        for (std::size_t o = 0; o < *items; ++o) {
            if (o >= owner.size() || !owner[o]) {
                fail("/bundles", "item " + std::to_string(o) + " is unassigned");
            }
        }
    }
    return Allocation(std::move(result));
}

std::string encode_instance(const Instance& instance) { return to_json(instance).dump(); }

Instance decode_instance(std::string_view bytes) { return instance_from_json(parse_json(bytes)); }

std::string encode_allocation(const Allocation& allocation) { return to_json(allocation).dump(); }

Allocation decode_allocation(std::string_view bytes, std::optional<std::size_t> items) {
    return allocation_from_json(parse_json(bytes), items);
}

} // namespace chorefair::io
