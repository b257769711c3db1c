#include "slglue/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slglue/errors.hpp"

namespace slglue {

std::string format_g17(double value) {
    if (!std::isfinite(value)) throw NumericError("non-finite value in report");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Json traced(double value, const std::string& provenance) {
    Json j;
    j["value"] = value;
    j["provenance"] = provenance;
    return j;
}

namespace {

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case Json::value_t::null:
            out += "null";
            break;
        case Json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case Json::value_t::number_integer:
            out += std::to_string(j.get<long long>());
            break;
        case Json::value_t::number_unsigned:
            out += std::to_string(j.get<unsigned long long>());
            break;
        case Json::value_t::number_float:
            out += format_g17(j.get<double>());
            break;
        case Json::value_t::string:
            out += Json(j.get<std::string>()).dump();
            break;
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_rec(item, indent, depth + 1, out);
            }
            out += "\n" + pad + "]";
            break;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + Json(it.key()).dump() + ": ";
                dump_rec(it.value(), indent, depth + 1, out);
            }
            out += "\n" + pad + "}";
            break;
        }
        default:
            throw NumericError("unsupported JSON value in report");
    }
}

}  // namespace

std::string dump_g17(const Json& j, int indent) {
    std::string out;
    dump_rec(j, indent, 0, out);
    out += "\n";
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << content;
    if (!f) throw ConfigError("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json read_json(const std::string& path) {
    const std::string text = read_text(path);
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("invalid JSON: " + path);
    return j;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ",";
        out += cells[i];
    }
    out += "\n";
    return out;
}

std::string csv_row(const std::vector<double>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) text.push_back(format_g17(v));
    return csv_row(text);
}

}  // namespace slglue
