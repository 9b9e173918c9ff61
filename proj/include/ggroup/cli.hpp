#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ggroup::cli {

/// Exit statuses shared by every command.
enum Exit : int {
  kOk = 0,
  kNoResult = 1,     // the query succeeded but found nothing / a check failed
  kInputError = 2,   // unreadable file, grammar error, malformed input
  kTruncated = 3,    // a search limit was reached; printed results are partial
};

/// Runs `ggroup <command> ...`; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ggroup::cli
