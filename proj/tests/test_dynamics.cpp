#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bimodal/decoupling.hpp"
#include "bimodal/dynamics.hpp"
#include "bimodal/hilbert.hpp"
#include "bimodal/models.hpp"

using namespace bimodal;

namespace {

// Hand-built trajectory for exercising the classifier without any physics.
Trajectory synthetic(const std::vector<double>& times,
                     const std::vector<double>& n1,
                     const std::vector<double>& n2) {
    Trajectory tr;
    tr.times = times;
    tr.n1_mean = n1;
    tr.n2_mean = n2;
    tr.sz_mean.assign(times.size(), -0.5);
    tr.excitation = n1;
    tr.norm_err.assign(times.size(), 0.0);
    return tr;
}

std::vector<double> linspace(double t_max, int n_steps) {
    return time_grid(t_max, n_steps);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("state constructors") {
    const HilbertSpec space = make_space(4);
    const QuantumState f = fock_state(space, 2, 1, Spin::up);
    CHECK(f.norm() == 1.0);
    CHECK(f.amplitudes(space.index_of(2, 1, Spin::up)) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(fock_state(space, 3, 2, Spin::down), std::out_of_range);

    const QuantumState c = coherent_state(space, Complex(0.4, 0.1),
                                          Complex(-0.2, 0.0), Spin::down);
    CHECK(std::abs(c.norm() - 1.0) < 1e-14);
    // Amplitude recursion c_n = c_{n-1} * alpha / sqrt(n) within one mode.
    const Complex a00 = c.amplitudes(space.index_of(0, 0, Spin::down));
    const Complex a10 = c.amplitudes(space.index_of(1, 0, Spin::down));
    const Complex a20 = c.amplitudes(space.index_of(2, 0, Spin::down));
    CHECK(std::abs(a10 / a00 - Complex(0.4, 0.1)) < 1e-13);
    CHECK(std::abs(a20 / a10 - Complex(0.4, 0.1) / std::sqrt(2.0)) < 1e-13);
    // No amplitude on the flipped atom.
    CHECK(std::abs(c.amplitudes(space.index_of(0, 0, Spin::up))) == 0.0);
}

TEST_CASE("time grid") {
    const std::vector<double> g = time_grid(8.0, 4);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 8.0);
    CHECK(g[1] == 2.0);

    const std::vector<double> single = time_grid(0.0, 100);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0.0);

    CHECK_THROWS_AS(time_grid(-1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(time_grid(1.0, 0), std::invalid_argument);
}

TEST_CASE("free evolution is stationary") {
    const HilbertSpec space = make_space(3);
    OperatorMatrix h(Matrix::Zero(space.dimension(), space.dimension()));
    const QuantumState psi = fock_state(space, 1, 1, Spin::down);
    const Trajectory tr = evolve(space, h, psi, linspace(5.0, 10));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(std::abs(tr.n1_mean[i] - 1.0) < 1e-14);
        CHECK(std::abs(tr.n2_mean[i] - 1.0) < 1e-14);
        CHECK(std::abs(tr.sz_mean[i] + 0.5) < 1e-14);
        CHECK(tr.norm_err[i] < 1e-13);
    }
}

TEST_CASE("two-level oscillation against the closed form") {
    // With only the mode-1 pair coupling, |2,0,down> talks to exactly one
    // other state and Rabi-oscillates: <n1>(t) = 1 + cos(sqrt(2) t).
    ModelParams p;
    p.g = Complex(0.0, 0.0);
    p.lambda2 = Complex(0.0, 0.0);  // lambda1 stays -1/2
    const HilbertSpec space = make_space(2);
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);
    const Trajectory tr = evolve(space, h, fock_state(space, 2, 0, Spin::down),
                                 linspace(5.0, 500));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double expected = 1.0 + std::cos(std::sqrt(2.0) * tr.times[i]);
        CHECK(std::abs(tr.n1_mean[i] - expected) < 1e-12);
        CHECK(std::abs(tr.excitation[i] - 2.0) < 1e-12);
    }
}

TEST_CASE("cross-coupled pair dynamics against the closed form") {
    // At the fully cross-coupled point (g = 1, lambda = -1/2) the n0 = 2
    // block is solvable by hand: <n1>(t) = (x^2 + 2x + 5)/4, x = cos(sqrt2 t).
    const ModelParams p;  // defaults are exactly that point
    const HilbertSpec space = make_space(2);
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);
    const Trajectory tr = evolve(space, h, fock_state(space, 2, 0, Spin::down),
                                 linspace(6.0, 600));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double x = std::cos(std::sqrt(2.0) * tr.times[i]);
        const double expected = (x * x + 2.0 * x + 5.0) / 4.0;
        CHECK(std::abs(tr.n1_mean[i] - expected) < 1e-12);
    }
}

TEST_CASE("block-resolved evolution matches the dense path") {
    const HilbertSpec space = make_space(4);
    const OperatorMatrix h = build_quadratic_hamiltonian(space, ModelParams{});

    // Superpose two excitation sectors so the block path has real work.
    QuantumState psi = fock_state(space, 3, 0, Spin::down);
    psi.amplitudes += fock_state(space, 1, 1, Spin::up).amplitudes;
    psi.amplitudes /= psi.amplitudes.norm();

    const std::vector<double> times = linspace(7.0, 40);
    EvolveOptions dense_opts;
    dense_opts.store_states = true;
    Trajectory dense = evolve(space, h, psi, times, dense_opts);

    const BlockDecomposition te = excitation_blocks(space, Conserved::total_excitation);
    EvolveOptions block_opts;
    block_opts.blocks = &te;
    block_opts.store_states = true;
    Trajectory blocked = evolve(space, h, psi, times, block_opts);

    REQUIRE(dense.states.size() == blocked.states.size());
    for (std::size_t i = 0; i < dense.states.size(); ++i) {
        CHECK(max_abs(Vector(dense.states[i] - blocked.states[i])) < 1e-12);
    }

    // Total-photon shells are NOT preserved by the pair couplings, so that
    // decomposition must be rejected as a block structure for this model.
    const BlockDecomposition shells = excitation_blocks(space, Conserved::total_photon);
    EvolveOptions bad;
    bad.blocks = &shells;
    CHECK_THROWS_AS(evolve(space, h, psi, times, bad), std::invalid_argument);
}

TEST_CASE("evolution input validation") {
    const HilbertSpec space = make_space(2);
    Matrix skew = Matrix::Zero(space.dimension(), space.dimension());
    skew(0, 1) = Complex(0.0, 1.0);  // not hermitian
    CHECK_THROWS_AS(evolve(space, OperatorMatrix(std::move(skew)),
                           fock_state(space, 0, 0, Spin::down), linspace(1.0, 2)),
                    std::invalid_argument);

    QuantumState zero;
    zero.amplitudes = Vector::Zero(space.dimension());
    const OperatorMatrix h = build_quadratic_hamiltonian(space, ModelParams{});
    CHECK_THROWS_AS(evolve(space, h, zero, linspace(1.0, 2)),
                    std::invalid_argument);
}

TEST_CASE("classifier on synthetic trajectories") {
    std::vector<double> times(101);
    for (int i = 0; i <= 100; ++i) times[static_cast<std::size_t>(i)] = 0.1 * i;

    SUBCASE("stationary population is a return") {
        const Trajectory tr = synthetic(times, std::vector<double>(101, 4.0),
                                        std::vector<double>(101, 0.0));
        const ParitySignature sig = classify_parity(tr, 4);
        CHECK(sig.classification == ParityClass::photon_return);
        CHECK(sig.drop_time == -1.0);
        CHECK(sig.event_time == -1.0);
        CHECK(!sig.plateau_found);
    }

    SUBCASE("transfer beats recovery when both happen") {
        std::vector<double> n1(101, 4.0), n2(101, 0.0);
        for (int i = 10; i < 20; ++i) n1[static_cast<std::size_t>(i)] = 0.0;
        for (int i = 50; i <= 100; ++i) n2[static_cast<std::size_t>(i)] = 4.0;
        const ParitySignature sig = classify_parity(synthetic(times, n1, n2), 4);
        CHECK(sig.classification == ParityClass::inversion);
        CHECK(std::abs(sig.event_time - 5.0) < 1e-12);
        CHECK(std::abs(sig.drop_time - 1.0) < 1e-12);
    }

    SUBCASE("recovery after a drop is a return") {
        std::vector<double> n1(101, 4.0), n2(101, 0.0);
        for (int i = 30; i <= 60; ++i) {
            n1[static_cast<std::size_t>(i)] = 2.0;
            n2[static_cast<std::size_t>(i)] = 2.0;
        }
        const ParitySignature sig = classify_parity(synthetic(times, n1, n2), 4);
        CHECK(sig.classification == ParityClass::photon_return);
        CHECK(std::abs(sig.drop_time - 3.0) < 1e-12);
        CHECK(std::abs(sig.event_time - 6.1) < 1e-12);
        // The half/half stretch is long enough to count as a plateau.
        CHECK(sig.plateau_found);
        CHECK(std::abs(sig.plateau_t0 - 3.0) < 1e-12);
        CHECK(std::abs(sig.plateau_t1 - 6.0) < 1e-12);
    }

    SUBCASE("no recovery and no transfer stays undecided") {
        std::vector<double> n1(101, 4.0), n2(101, 1.0);
        for (int i = 10; i <= 100; ++i) n1[static_cast<std::size_t>(i)] = 0.5;
        const ParitySignature sig = classify_parity(synthetic(times, n1, n2), 4);
        CHECK(sig.classification == ParityClass::undecided);
        CHECK(std::abs(sig.drop_time - 1.0) < 1e-12);
        CHECK(sig.event_time == -1.0);
    }

    SUBCASE("empty initial population is degenerate") {
        const Trajectory tr = synthetic(times, std::vector<double>(101, 0.0),
                                        std::vector<double>(101, 0.0));
        CHECK(classify_parity(tr, 0).classification == ParityClass::undecided);
    }

    CHECK(parity_class_name(ParityClass::inversion) == "INVERSION");
    CHECK(parity_class_name(ParityClass::photon_return) == "RETURN");
    CHECK(parity_class_name(ParityClass::undecided) == "UNDECIDED");
}

TEST_CASE("parity experiment classifies by initial parity") {
    const ModelParams p = parity_default_params();
    CHECK(std::abs(p.g) == 0.0);
    CHECK(std::abs(p.lambda1 - Complex(-0.5, 0.0)) == 0.0);

    const ParityResult even = parity_experiment(p, 2, 25.0, 2500);
    CHECK(even.signature.classification == ParityClass::inversion);
    CHECK(std::abs(even.signature.event_time - 2.48) < 0.02);

    const ParityResult odd = parity_experiment(p, 3, 25.0, 2500);
    CHECK(odd.signature.classification == ParityClass::photon_return);
    CHECK(std::abs(odd.signature.event_time - 3.97) < 0.02);

    // A horizon too short to contain the deciding event stays undecided.
    const ParityResult early = parity_experiment(p, 7, 5.0, 500);
    CHECK(early.signature.classification == ParityClass::undecided);

    CHECK_THROWS_AS(parity_experiment(p, -1, 10.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(parity_experiment(p, 3, 10.0, 100, /*n_max=*/2),
                    std::invalid_argument);
}

TEST_CASE("frame oracle reproduces the direct evolution") {
    const ModelParams p;  // decoupling relations hold at the defaults
    const HilbertSpec space = make_space(6);
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);

    QuantumState psi = fock_state(space, 3, 0, Spin::down);
    psi.amplitudes += 0.5 * fock_state(space, 1, 2, Spin::down).amplitudes;
    psi.amplitudes /= psi.amplitudes.norm();

    const std::vector<double> times = linspace(20.0, 80);
    EvolveOptions opts;
    opts.store_states = true;
    const Trajectory direct = evolve(space, h, psi, times, opts);
    const Trajectory frame = frame_evolve_oracle(space, p, psi, times);

    REQUIRE(direct.states.size() == frame.states.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.states.size(); ++i) {
        worst = std::max(worst, max_abs(Vector(direct.states[i] - frame.states[i])));
    }
    CHECK(worst < 1e-8);

    // The oracle insists on the decoupling relations.
    ModelParams detuned = p;
    detuned.lambda2 += 0.05;
    CHECK_THROWS_AS(frame_evolve_oracle(space, detuned, psi, times),
                    std::invalid_argument);
}

}  // TEST_SUITE
