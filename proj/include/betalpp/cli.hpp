#ifndef BETALPP_CLI_HPP
#define BETALPP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace betalpp::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2 };

/// Runs one command line (without the program name). Results go to `out`
/// unless --output is given; diagnostics and help go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Compact JSON with doubles at 17 significant digits and non-finite values as null.
std::string canonical_json(const nlohmann::ordered_json& doc);

/// CSV projection: rows of the array at `table` (or the top-level scalars when
/// `table` is empty), columns in first-row key order.
std::string to_csv(const nlohmann::ordered_json& doc, const std::string& table);

} // namespace betalpp::cli

#endif // BETALPP_CLI_HPP
