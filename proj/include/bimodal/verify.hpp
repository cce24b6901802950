#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bimodal/models.hpp"

namespace bimodal {

// degenerate marks a check that is not asserted for these inputs: either the
// parameters make it inapplicable (decoupling relations violated, so there is
// no decoupled form to compare against) or the check is report-only by
// design. Only fail statuses should gate a build.
enum class CheckStatus { pass, fail, degenerate };

std::string_view check_status_name(CheckStatus s);

struct CheckResult {
    std::string check_id;
    CheckStatus status = CheckStatus::degenerate;
    double residual = 0.0;
    double tolerance = 0.0;
    nlohmann::json context;  // parameter snapshot and per-check extras
};

nlohmann::json to_json(const CheckResult& r);
nlohmann::json params_json(const ModelParams& p);  // complex values as [re, im]

bool all_passed(const std::vector<CheckResult>& results);  // no fail entries
double worst_residual_ratio(const std::vector<CheckResult>& results);

// Deterministic draws shared by the suites and the CLI. uniform() maps the
// raw 64-bit engine output through (x >> 11) * 2^-53 explicitly, so sequences
// are identical across standard libraries.
class ParamSampler {
public:
    explicit ParamSampler(std::uint64_t seed) : state_(seed) {}

    double uniform01();
    double uniform(double lo, double hi);
    Complex coupling();  // magnitude in [0.1, 2], uniform phase

    // Random model satisfying the decoupling relations: complex g,
    // lambda1 = lambda2 = -g/2, Stark and exchange strengths in [-1, 1],
    // resonant frequencies.
    ModelParams constrained_model();

private:
    std::mt19937_64 state_;
};

// Mode-map unitarity over random (theta, eta) plus, for a quarter as many
// draws, assembled-transform unitarity and the operator-map residual
// ||V' a_mu V - sum_nu M[mu][nu] a_nu||_max for generator draws whose angle
// was solved to kill the rotated mixing. One result per draw plus a .worst
// aggregate per family.
std::vector<CheckResult> suite_canonicity(std::uint64_t seed, int n_draws,
                                          int n_max = 8);

// Constraint relations, forbidden coefficients of the conjugated model,
// coefficient-by-coefficient match against the directly built decoupled
// form, spectator-number commutator, residual linearity under a lambda2
// perturbation, and the negative control (perturbation must be detected).
std::vector<CheckResult> suite_decoupling(const ModelParams& p, int n_max);

// Total-excitation commutator, the lab-frame spectator invariant
// V n2 V' (commutator and expectation drift along a sample trajectory), and
// a report-only detuned variant.
std::vector<CheckResult> suite_constants_of_motion(const ModelParams& p,
                                                   int n_max);

// Dual-path evolution (direct vs decoupled-frame oracle) state-by-state over
// n_points times in [0, 50/max(|g|, 0.1)], and per-block spectral agreement
// between the model and its decoupled form.
std::vector<CheckResult> suite_frame_equivalence(const ModelParams& p,
                                                 int n_max, int n0,
                                                 int n_points);

}  // namespace bimodal
