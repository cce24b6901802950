#include "bimodal/io.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

namespace bimodal {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<KeyValue>& header) {
    for (const KeyValue& kv : header) {
        out << "# " << kv.key << " = " << kv.value << "\n";
    }
    out << "t,n1_mean,n2_mean,sz_mean,norm_err,excitation\n";
    const std::size_t n = trajectory.times.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << format_double(trajectory.times[i]) << ','
            << format_double(trajectory.n1_mean[i]) << ','
            << format_double(trajectory.n2_mean[i]) << ','
            << format_double(trajectory.sz_mean[i]) << ','
            << format_double(trajectory.norm_err[i]) << ','
            << format_double(trajectory.excitation[i]) << '\n';
    }
}

void write_check_results_jsonl(std::ostream& out,
                               const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results) {
        out << to_json(r).dump() << "\n";
    }
}

}  // namespace bimodal
