#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bimodal {

// Runs the command-line tool on already-split arguments (argv without the
// program name). Machine-readable results (CSV, JSONL, JSON) go to `out` or
// to the file named by --out; human summaries and error messages go to `err`.
//
// Exit codes: 0 success, 1 at least one verification check failed,
// 2 usage or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bimodal
