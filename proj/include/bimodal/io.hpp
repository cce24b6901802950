#pragma once

// Plain-text output: trajectory CSV and verification-report JSONL.
//
// Both writers are deterministic down to the byte.  Doubles are printed with
// std::to_chars in shortest round-trip form, so re-reading a value yields the
// exact bits that were written, and repeated runs with the same inputs produce
// identical files.  JSONL rows come from CheckResult::to_json, whose object
// keys are emitted in sorted order.

#include <iosfwd>
#include <string>
#include <vector>

#include "bimodal/dynamics.hpp"
#include "bimodal/verify.hpp"

namespace bimodal {

// Shortest decimal string that round-trips to exactly this double.
std::string format_double(double value);

// One "# key = value" comment line in a CSV preamble.
struct KeyValue {
    std::string key;
    std::string value;
};

// Writes the preamble comments, the fixed column header
// t,n1_mean,n2_mean,sz_mean,norm_err,excitation, and one row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<KeyValue>& header);

// One check result per line, as compact JSON.
void write_check_results_jsonl(std::ostream& out,
                               const std::vector<CheckResult>& results);

}  // namespace bimodal
