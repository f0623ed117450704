// command line front end; kept callable in process so tests can drive
// it without spawning

#ifndef SPANNERS_CLI_HPP
#define SPANNERS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanners/decisions.hpp"

namespace spanners {

// exit codes: 0 yes/success, 1 no or unknown, 2 usage or domain error,
// 3 resource budget exceeded
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// format is "", "rgx" or "json"; empty sniffs by extension
Vsa load_spanner(const std::string& path, const std::string& format);

nlohmann::ordered_json verdict_json(const Verdict& v, double elapsed_ms);

}  // namespace spanners

#endif
