#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace slglue {

// Insertion-ordered JSON so that serialized reports have a stable key order.
using Json = nlohmann::ordered_json;

// %.17g text of a double; round-trip exact. Throws on non-finite values.
std::string format_g17(double value);

// {"value": v, "provenance": "operation(parameters)"}
Json traced(double value, const std::string& provenance);

// Serialization with every float rendered as %.17g, so reruns of a
// deterministic computation rewrite identical bytes.
std::string dump_g17(const Json& j, int indent = 2);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);
Json read_json(const std::string& path);

// comma-joined row with trailing newline; doubles rendered as %.17g
std::string csv_row(const std::vector<std::string>& cells);
std::string csv_row(const std::vector<double>& cells);

}  // namespace slglue
