#pragma once

#include "chorefair/core.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace chorefair::io {

using Json = nlohmann::json;

// Instance schema:
//   {"agents": n, "items": [names...], "costs": [["p/q", ...] x n],
//    "normalized": bool, "meta": {...}}
// "items" and "normalized" are optional on input; when "normalized" is
// present it must agree with the matrix. "meta" is ignored by the decoder.
Json to_json(const Instance& instance);
Instance instance_from_json(const Json& json);

// Allocation schema: {"bundles": [[item indices] x n]}. With `items` given,
// indices are range-checked and the bundles must cover 0..items-1.
Json to_json(const Allocation& allocation);
Allocation allocation_from_json(const Json& json, std::optional<std::size_t> items = std::nullopt);

// Byte-level entry points. encode_* produce compact canonical JSON (keys in
// sorted order); decode_* throw ParseError with a JSON-pointer location.
std::string encode_instance(const Instance& instance);
Instance decode_instance(std::string_view bytes);
std::string encode_allocation(const Allocation& allocation);
Allocation decode_allocation(std::string_view bytes, std::optional<std::size_t> items = std::nullopt);

Json parse_json(std::string_view bytes);

} // namespace chorefair::io
