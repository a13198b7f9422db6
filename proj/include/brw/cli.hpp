#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "brw/experiments.hpp"

namespace brw {

/// Raised by parse_args for --help; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws UsageError on unknown flags, bad values or a missing --experiment.
RunConfig parse_args(int argc, const char* const* argv);

/// Runs the experiment, writes the report and `<out>.manifest.json`, prints
/// one line per check. Returns 0, or 2 when --check is set and a check failed.
int run(const RunConfig& cfg, std::ostream& out);

/// parse_args + run with exit codes 0 / 1 (usage or runtime error) / 2.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace brw
