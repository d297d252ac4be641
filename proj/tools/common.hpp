// Shared bits between the CLI dispatcher and the selftest subcommand.
#pragma once

#include <complex>
#include <map>
#include <string>

namespace lrp::cli {

// "re,im" → complex (e.g. "0,4" → 4i). Throws std::invalid_argument with the
// offending text on malformed input.
std::complex<double> parse_complex(const std::string& text);

using KeyValueMap = std::map<std::string, std::string>;

int run_selftest(bool verbose);

}  // namespace lrp::cli
