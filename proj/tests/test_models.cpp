#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bimodal/hilbert.hpp"
#include "bimodal/models.hpp"

using namespace bimodal;

namespace {

Complex elem(const OperatorMatrix& op, const HilbertSpec& space, int n1a,
             int n2a, Spin sa, int n1b, int n2b, Spin sb) {
    return op.entries(space.index_of(n1a, n2a, sa), space.index_of(n1b, n2b, sb));
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("linear model matrix elements") {
    const HilbertSpec space = make_space(3);
    ModelParams p;
    p.g1 = Complex(0.3, 0.4);
    p.g2 = Complex(0.2, 0.0);
    const OperatorMatrix h = build_linear_hamiltonian(space, p);

    CHECK(h.hermitian.value_or(false));
    // g a' S- lowers the atom and creates one photon.
    CHECK(std::abs(elem(h, space, 1, 0, Spin::down, 0, 0, Spin::up) - p.g1) <
          1e-15);
    CHECK(std::abs(elem(h, space, 0, 1, Spin::down, 0, 0, Spin::up) - p.g2) <
          1e-15);
    CHECK(std::abs(elem(h, space, 2, 0, Spin::down, 1, 0, Spin::up) -
                   std::sqrt(2.0) * p.g1) < 1e-15);
    // Diagonal: omega0 Sz + omega (n1 + n2).
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 0, 0, Spin::up) -
                   Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(elem(h, space, 2, 1, Spin::down, 2, 1, Spin::down) -
                   Complex(2.0, 0.0)) < 1e-15);
}

TEST_CASE("quadratic model matrix elements") {
    const HilbertSpec space = make_space(4);
    ModelParams p;  // defaults: lambda1 = lambda2 = -1/2, g = 1
    p.s = 0.7;
    p.r1 = 0.3;
    p.r2 = 0.1;
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);
    CHECK(h.hermitian.value_or(false));

    // Pair couplings: (lambda1 a1^2 + lambda2 a2^2 + g a1 a2) S+ and h.c.
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 2, 0, Spin::down) -
                   std::sqrt(2.0) * p.lambda1) < 1e-15);
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 0, 2, Spin::down) -
                   std::sqrt(2.0) * p.lambda2) < 1e-15);
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 1, 1, Spin::down) - p.g) <
          1e-15);
    CHECK(std::abs(elem(h, space, 2, 0, Spin::down, 0, 0, Spin::up) -
                   std::conj(std::sqrt(2.0) * p.lambda1)) < 1e-15);

    // Stark shift on the diagonal: omega (n1+n2) + omega0 Sz + s (n1+n2) Sz.
    CHECK(std::abs(elem(h, space, 1, 1, Spin::up, 1, 1, Spin::up) -
                   Complex(2.0 + 1.0 + 0.7, 0.0)) < 1e-15);

    // Photon exchange (r1 + r2 Sz) between the modes.
    CHECK(std::abs(elem(h, space, 1, 0, Spin::down, 0, 1, Spin::down) -
                   Complex(0.3 - 0.05, 0.0)) < 1e-15);
    CHECK(std::abs(elem(h, space, 1, 0, Spin::up, 0, 1, Spin::up) -
                   Complex(0.3 + 0.05, 0.0)) < 1e-15);

    // The model trades a photon pair against one atomic flip, so the
    // weighted excitation count commutes with it even at these couplings.
    const Matrix te = total_excitation_op(space).entries;
    const Matrix comm = te * h.entries - h.entries * te;
    CHECK(max_abs(comm) < 1e-13);
}

TEST_CASE("two-photon resonance is enforced unless waived") {
    const HilbertSpec space = make_space(2);
    ModelParams p;
    p.omega0 = 2.3;
    CHECK_THROWS_AS(build_quadratic_hamiltonian(space, p), std::invalid_argument);
    p.enforce_resonance = false;
    CHECK_NOTHROW(build_quadratic_hamiltonian(space, p));

    ModelParams bad;
    bad.spin_ladder_scale = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("alternative spin ladder amplitude") {
    const HilbertSpec space = make_space(4);
    ModelParams p;
    p.spin_ladder_scale = 0.5;
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 2, 0, Spin::down) -
                   0.5 * std::sqrt(2.0) * p.lambda1) < 1e-15);
}

TEST_CASE("decoupled form keeps one driven mode") {
    const HilbertSpec space = make_space(4);
    ModelParams p;  // satisfies lambda1 = lambda2 = -g/2
    const OperatorMatrix h = build_decoupled_hamiltonian(space, p);
    CHECK(h.hermitian.value_or(false));

    // Mode 1 keeps a doubled pair coupling, mode 2 loses its spin flips.
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 2, 0, Spin::down) -
                   2.0 * p.lambda1 * std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 0, 2, Spin::down)) == 0.0);
    CHECK(std::abs(elem(h, space, 0, 0, Spin::up, 1, 1, Spin::down)) == 0.0);

    ModelParams detuned = p;
    detuned.lambda2 += 0.05;
    CHECK_THROWS_AS(build_decoupled_hamiltonian(space, detuned),
                    std::invalid_argument);
}

TEST_CASE("reduced single-mode model matrix elements") {
    const SingleModeSpec sm = make_single_mode_space(4);
    ModelParams p;  // omega0 = 2, omega = 1, lambda1 = -1/2, rest zero
    const OperatorMatrix h = build_reduced_jcm(sm, p, /*n2=*/1);
    CHECK(h.hermitian.value_or(false));

    // (omega0 + n2 (s + r2)) Sz + (omega + r1) n2 + [omega + (s - r2) Sz - r1] n
    // + (2 lambda1 a^2 S+ + h.c.)
    const Complex down2 = h.entries(sm.index_of(2, Spin::down), sm.index_of(2, Spin::down));
    CHECK(std::abs(down2 - Complex(-1.0 + 1.0 + 2.0, 0.0)) < 1e-15);
    const Complex flip = h.entries(sm.index_of(0, Spin::up), sm.index_of(2, Spin::down));
    CHECK(std::abs(flip - 2.0 * p.lambda1 * std::sqrt(2.0)) < 1e-14);

    CHECK_THROWS_AS(build_reduced_jcm(sm, p, -1), std::invalid_argument);
}

TEST_CASE("coefficient extraction recovers the builder inputs") {
    const HilbertSpec space = make_space(6);
    ModelParams p;
    p.s = 0.4;
    p.r1 = -0.2;
    p.r2 = 0.15;
    p.lambda1 = Complex(0.3, -0.1);
    p.lambda2 = Complex(0.3, -0.1);
    p.g = Complex(-0.6, 0.2);
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);

    const CoefficientExtraction ex = extract_coefficients(space, h.entries);
    CHECK(ex.residual_max < 1e-12 * ex.scale);
    CHECK(ex.table.hermiticity_defect() < 1e-13);

    CHECK(std::abs(ex.table.coeff(OperatorLabel::sz) - Complex(2.0, 0.0)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::n1) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::n2) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::n1_sz) - Complex(0.4, 0.0)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1d_a2) - Complex(-0.2, 0.0)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1d_a2_sz) - Complex(0.15, 0.0)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1_a1_sp) - p.lambda1) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1d_a1d_sm) - std::conj(p.lambda1)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1_a2_sp) - p.g) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1_a1)) < 1e-12);
    CHECK(std::abs(ex.table.coeff(OperatorLabel::a1_a2)) < 1e-12);
}

TEST_CASE("extraction flags matrices outside the family") {
    const HilbertSpec space = make_space(5);
    // A bare one-photon coupling is linear in the mode operators — not in
    // the quadratic family the extractor fits.
    ModelParams p;
    p.g1 = Complex(0.5, 0.0);
    const OperatorMatrix h1 = build_linear_hamiltonian(space, p);
    CHECK_THROWS_AS(extract_coefficients(space, h1.entries), std::runtime_error);

    ExtractOptions lax;
    lax.enforce_family = false;
    const CoefficientExtraction ex = extract_coefficients(space, h1.entries, lax);
    CHECK(ex.residual_max > 0.1);

    CHECK_THROWS_AS(extract_coefficients(make_space(3), Matrix::Zero(20, 20)),
                    std::invalid_argument);
    CHECK_THROWS_AS(extract_coefficients(space, Matrix::Zero(4, 4)),
                    std::invalid_argument);
}

TEST_CASE("conjugate-pair bookkeeping") {
    CoefficientTable t;
    t.coefficients[OperatorLabel::a1_a2_sp] = Complex(0.4, 0.3);
    t.coefficients[OperatorLabel::a1d_a2d_sm] = Complex(0.4, -0.3);
    CHECK(t.hermiticity_defect() < 1e-15);
    t.coefficients[OperatorLabel::a1d_a2d_sm] = Complex(0.4, 0.3);
    CHECK(t.hermiticity_defect() > 0.5);

    for (OperatorLabel l : all_operator_labels()) {
        CHECK(conjugate_label(conjugate_label(l)) == l);
        CHECK(!label_name(l).empty());
    }
    CHECK(conjugate_label(OperatorLabel::sz) == OperatorLabel::sz);
    CHECK(conjugate_label(OperatorLabel::a1_a1_sp) == OperatorLabel::a1d_a1d_sm);
}

}  // TEST_SUITE
