#pragma once

#include <array>
#include <map>
#include <string_view>
#include <vector>

#include "bimodal/hilbert.hpp"
#include "bimodal/linalg.hpp"

namespace bimodal {

// Parameters of the two-mode/two-level family. Frequencies and the Stark (s)
// and mode-exchange (r1, r2) strengths are real; the one-photon couplings
// (g1, g2), the two-photon couplings (lambda1, lambda2) and the cross-mode
// two-photon coupling (g) may be complex. hbar = 1 throughout.
struct ModelParams {
    double omega0 = 2.0;  // atomic transition frequency
    double omega = 1.0;   // shared mode frequency
    double s = 0.0;       // photon-number-dependent Stark shift
    double r1 = 0.0;      // photon exchange between the modes
    double r2 = 0.0;      // spin-dressed photon exchange
    Complex g1{0.0, 0.0};       // one-photon couplings (linear model only)
    Complex g2{0.0, 0.0};
    Complex lambda1{-0.5, 0.0};  // same-mode two-photon couplings
    Complex lambda2{-0.5, 0.0};
    Complex g{1.0, 0.0};         // cross-mode two-photon coupling

    // S+ |down> = spin_ladder_scale |up>; 1 everywhere unless a caller opts
    // into the alternative 1/2 amplitude convention.
    double spin_ladder_scale = 1.0;

    // The quadratic model is derived at two-photon resonance; when set,
    // builders insist on omega0 == 2*omega exactly.
    bool enforce_resonance = true;

    void validate() const;  // throws std::invalid_argument
};

// One-photon model: omega0 Sz + omega (n1 + n2) + sum_mode (g_mode a_mode' S- + h.c.).
OperatorMatrix build_linear_hamiltonian(const HilbertSpec& space, const ModelParams& p);

// Two-photon model: adds the Stark term s Sz (n1+n2), the photon-exchange
// term (r1 + r2 Sz)(a1 a2' + a1' a2), and the pair couplings
// (lambda1 a1^2 + lambda2 a2^2 + g a1 a2) S+ + h.c. Commutes with the total
// excitation n1 + n2 + 2(Sz + 1/2) by construction.
OperatorMatrix build_quadratic_hamiltonian(const HilbertSpec& space, const ModelParams& p);

// The same model after the decoupling rotation, written directly in its
// decoupled form: mode 1 keeps a pair coupling of strength 2*lambda1, mode 2
// reduces to number terms. Requires lambda1 == lambda2 == -g/2 (throws
// std::invalid_argument naming the violated relation otherwise).
OperatorMatrix build_decoupled_hamiltonian(const HilbertSpec& space, const ModelParams& p);

// Single-mode model obtained by freezing the decoupled spectator mode at
// occupation n2: (omega0 + n2 (s + r2)) Sz + (omega + r1) n2
//               + [omega + (s - r2) Sz - r1] n + (2 lambda1 a^2 S+ + h.c.).
OperatorMatrix build_reduced_jcm(const SingleModeSpec& space, const ModelParams& p, int n2);

// Canonical operator basis for everything quadratic in the mode operators
// (optionally dressed by Sz or by one spin flip), plus number/identity terms.
// Lowering/hopping forms come first in each conjugate pair.
enum class OperatorLabel : int {
    one = 0,
    sz,
    n1,
    n2,
    n1_sz,
    n2_sz,
    a1d_a2,      // a1' a2
    a2d_a1,
    a1d_a2_sz,   // (a1' a2) Sz
    a2d_a1_sz,
    a1_a1,       // a1^2
    a1d_a1d,
    a2_a2,
    a2d_a2d,
    a1_a2,       // a1 a2
    a1d_a2d,
    a1_a1_sp,    // a1^2 S+
    a1d_a1d_sm,
    a2_a2_sp,
    a2d_a2d_sm,
    a1_a2_sp,
    a1d_a2d_sm,
};

inline constexpr int kOperatorLabelCount = 22;

const std::array<OperatorLabel, kOperatorLabelCount>& all_operator_labels();
std::string_view label_name(OperatorLabel l);
OperatorLabel conjugate_label(OperatorLabel l);

// Matrix of one basis operator. The spin-ladder amplitude is fixed at 1 here
// (the canonical basis); Hamiltonians built with a different ladder scale
// extract with that scale absorbed into the spin-flip coefficients.
Matrix label_operator(const HilbertSpec& space, OperatorLabel l);

struct CoefficientTable {
    std::map<OperatorLabel, Complex> coefficients;

    Complex coeff(OperatorLabel l) const;  // zero when absent
    // max |c(L) - conj(c(L'))| over conjugate pairs; zero for hermitian input
    double hermiticity_defect() const;
};

struct CoefficientExtraction {
    CoefficientTable table;
    double residual_max;  // ||H - sum c_L Op_L||_max over the fitted interior
    double scale;         // ||H||_max
};

struct ExtractOptions {
    bool enforce_family = true;  // throw when the residual exceeds tol_rel * scale
    double tol_rel = 1e-10;
};

// Least-squares projection onto the canonical basis, fitted on the interior
// n1 + n2 <= n_max - 2 where the truncated matrices agree with the untruncated
// operators entry for entry. Requires n_max >= 4 so every basis operator has
// support in the interior. With enforce_family set, a residual above
// tol_rel * scale throws std::runtime_error listing the largest unexplained
// matrix elements.
CoefficientExtraction extract_coefficients(const HilbertSpec& space, const Matrix& h,
                                           const ExtractOptions& opts = {});

}  // namespace bimodal
