#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slglue/json_io.hpp"

namespace slglue {

// One batch run: a subcommand, its flat parameter object (config file keys
// overridden by command-line flags), a seed and an output directory.
struct RunConfig {
    std::string command;
    Json parameters = Json::object();
    std::uint64_t seed = 12345;
    std::string output_dir = ".";
};

// Executes the subcommand, writes its artifacts into output_dir and returns
// the JSON written to report.json.
Json run(const RunConfig& config);

// argv front-end. Maps error families onto exit codes: 0 success, 2 config,
// 3 numeric, 4 geometric; failures print a machine-readable error JSON.
int run_cli(int argc, char** argv);

// flat-parameter readers shared with the tests; values may be JSON numbers
// or strings
double param_double(const Json& params, const std::string& key, double fallback);
long param_int(const Json& params, const std::string& key, long fallback);
std::string param_string(const Json& params, const std::string& key,
                         const std::string& fallback);
std::vector<double> param_list(const Json& params, const std::string& key,
                               const std::vector<double>& fallback);

}  // namespace slglue
