#pragma once

// Command-line front end: weight-specification grammar, subcommand dispatch,
// and JSON/CSV emission. Kept in the library so tests can drive it directly.

#include <string>

#include "summinc/weights.hpp"

namespace summinc {

/// Parses a weight specification string:
///   "{...}"                     inline JSON object,
///   "path/to/file.json"         JSON file,
///   "path/to/file.csv"          CSV file of explicit values,
///   "family[:param[:offset]]"   built-in family: "constant[:offset]",
///                               "power:exponent[:offset]" (offset defaults
///                               to 1 so the value at index 0 is positive),
///                               "geometric:ratio[:offset]",
///                               "exponential:rate[:offset]".
WeightSequence parse_weight_spec(const std::string& spec);

/// Runs the full command line. Returns the process exit code:
/// 0 success, 2 invalid input or configuration, 3 I/O failure,
/// 4 internal error.
int run_cli(int argc, const char* const* argv);

}  // namespace summinc
