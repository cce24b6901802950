#include "bimodal/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bimodal/decoupling.hpp"

namespace bimodal {

namespace {

constexpr Complex kI{0.0, 1.0};

// Diagonal observable values per basis index, so every expectation value is a
// probability-weighted sum.
struct DiagonalObservables {
    std::vector<double> n1, n2, sz, exc;

    explicit DiagonalObservables(const HilbertSpec& space) {
        const int d = space.dimension();
        n1.resize(d);
        n2.resize(d);
        sz.resize(d);
        exc.resize(d);
        for (int i = 0; i < d; ++i) {
            const BasisKet& k = space.ket(i);
            n1[i] = k.n1;
            n2[i] = k.n2;
            sz[i] = k.sigma == Spin::up ? 0.5 : -0.5;
            exc[i] = total_excitation(k);
        }
    }
};

void append_observables(Trajectory& tr, const Vector& psi, double norm0,
                        const DiagonalObservables& obs) {
    double w1 = 0.0, w2 = 0.0, wz = 0.0, we = 0.0, total = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double p = std::norm(psi[i]);
        total += p;
        w1 += p * obs.n1[i];
        w2 += p * obs.n2[i];
        wz += p * obs.sz[i];
        we += p * obs.exc[i];
    }
    tr.n1_mean.push_back(w1 / total);
    tr.n2_mean.push_back(w2 / total);
    tr.sz_mean.push_back(wz / total);
    tr.excitation.push_back(we / total);
    tr.norm_err.push_back(std::abs(std::sqrt(total) - norm0));
}

// Eigendecomposition of one diagonal block, with the coefficients of the
// initial state already rotated into the eigenbasis.
struct BlockSolution {
    std::vector<int> indices;
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
    Vector coeffs;
};

BlockSolution solve_block(const Matrix& h, const Vector& psi0,
                          const std::vector<int>& indices) {
    const Eigen::Index m = static_cast<Eigen::Index>(indices.size());
    Matrix hb(m, m);
    Vector pb(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        pb[r] = psi0[indices[static_cast<std::size_t>(r)]];
        for (Eigen::Index c = 0; c < m; ++c) {
            hb(r, c) = h(indices[static_cast<std::size_t>(r)],
                         indices[static_cast<std::size_t>(c)]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hb);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed on a block of size " +
                                 std::to_string(m));
    }
    BlockSolution out;
    out.indices = indices;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    out.coeffs = out.eigenvectors.adjoint() * pb;
    return out;
}

}  // namespace

QuantumState fock_state(const HilbertSpec& space, int n1, int n2, Spin sigma) {
    QuantumState st;
    st.amplitudes = Vector::Zero(space.dimension());
    st.amplitudes[space.index_of(n1, n2, sigma)] = 1.0;
    return st;
}

QuantumState coherent_state(const HilbertSpec& space, Complex alpha1,
                            Complex alpha2, Spin sigma) {
    // alpha^n / sqrt(n!) built by recursion; the overall exp(-|alpha|^2 / 2)
    // factor is dropped because the truncated vector gets renormalized anyway.
    const int n_max = space.n_max();
    std::vector<Complex> w1(static_cast<std::size_t>(n_max) + 1);
    std::vector<Complex> w2(static_cast<std::size_t>(n_max) + 1);
    w1[0] = w2[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        w1[static_cast<std::size_t>(n)] =
            w1[static_cast<std::size_t>(n - 1)] * alpha1 / std::sqrt(double(n));
        w2[static_cast<std::size_t>(n)] =
            w2[static_cast<std::size_t>(n - 1)] * alpha2 / std::sqrt(double(n));
    }
    QuantumState st;
    st.amplitudes = Vector::Zero(space.dimension());
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisKet& k = space.ket(i);
        if (k.sigma != sigma) continue;
        st.amplitudes[i] = w1[static_cast<std::size_t>(k.n1)] *
                           w2[static_cast<std::size_t>(k.n2)];
    }
    st.amplitudes /= st.amplitudes.norm();
    return st;
}

std::vector<double> time_grid(double t_max, int n_steps) {
    if (t_max == 0.0) return {0.0};
    if (!(t_max > 0.0) || n_steps < 1) {
        throw std::invalid_argument("time_grid needs t_max >= 0 and n_steps >= 1");
    }
    std::vector<double> ts(static_cast<std::size_t>(n_steps) + 1);
    for (int i = 0; i <= n_steps; ++i) {
        ts[static_cast<std::size_t>(i)] = t_max * double(i) / double(n_steps);
    }
    return ts;
}

Trajectory evolve(const HilbertSpec& space, const OperatorMatrix& h,
                  const QuantumState& psi0, const std::vector<double>& times,
                  const EvolveOptions& opts) {
    const int d = space.dimension();
    if (h.dimension() != d || psi0.amplitudes.size() != d) {
        throw std::invalid_argument("evolve: operator/state dimension mismatch");
    }
    OperatorMatrix ham = h;
    if (!ham.hermitian.value_or(false) && !ham.certify_hermitian()) {
        throw std::invalid_argument(
            "evolve: hamiltonian is not hermitian within tolerance");
    }
    const double norm0 = psi0.norm();
    if (norm0 <= 0.0) {
        throw std::invalid_argument("evolve: initial state is zero");
    }

    // Either the caller's decomposition (validated below) or one block
    // covering everything; the loop does not care which.
    std::vector<std::vector<int>> groups;
    if (opts.blocks != nullptr) {
        const double scale = std::max(1.0, max_abs(ham.entries));
        Matrix masked = Matrix::Zero(d, d);
        for (const Block& b : opts.blocks->blocks) {
            embed_block(masked, restrict_to_block(ham.entries, b), b);
            groups.push_back(b.indices);
        }
        if (max_abs(Matrix(ham.entries - masked)) > 1e-12 * scale) {
            throw std::invalid_argument(
                "evolve: hamiltonian is not block-diagonal in the given "
                "decomposition");
        }
    } else {
        groups.emplace_back();
        groups.back().resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) groups.back()[static_cast<std::size_t>(i)] = i;
    }

    std::vector<BlockSolution> solved;
    solved.reserve(groups.size());
    for (const auto& g : groups) {
        solved.push_back(solve_block(ham.entries, psi0.amplitudes, g));
    }

    const DiagonalObservables obs(space);
    Trajectory tr;
    tr.times = times;
    const std::size_t nt = times.size();
    tr.n1_mean.reserve(nt);
    tr.n2_mean.reserve(nt);
    tr.sz_mean.reserve(nt);
    tr.excitation.reserve(nt);
    tr.norm_err.reserve(nt);
    if (opts.store_states) tr.states.reserve(nt);

    Vector psi(d);
    for (double t : times) {
        for (const BlockSolution& b : solved) {
            const Eigen::Index m = static_cast<Eigen::Index>(b.indices.size());
            Vector phase(m);
            for (Eigen::Index j = 0; j < m; ++j) {
                phase[j] = std::exp(-kI * (b.eigenvalues[j] * t)) * b.coeffs[j];
            }
            const Vector local = b.eigenvectors * phase;
            for (Eigen::Index j = 0; j < m; ++j) {
                psi[b.indices[static_cast<std::size_t>(j)]] = local[j];
            }
        }
        append_observables(tr, psi, norm0, obs);
        if (opts.store_states) tr.states.push_back(psi);
    }
    return tr;
}

std::string_view parity_class_name(ParityClass c) {
    switch (c) {
        case ParityClass::inversion: return "INVERSION";
        case ParityClass::photon_return: return "RETURN";
        case ParityClass::undecided: return "UNDECIDED";
    }
    return "UNDECIDED";
}

ParitySignature classify_parity(const Trajectory& tr, int n0,
                                const ParityDetector& det) {
    ParitySignature sig;
    const std::size_t n = tr.times.size();
    if (n0 <= 0 || n < 2) return sig;  // degenerate: stays UNDECIDED

    const double target = 0.5 * n0;
    const double level = det.dominance * n0;

    std::size_t i_drop = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (tr.n1_mean[i] <= target) {
            i_drop = i;
            sig.drop_time = tr.times[i];
            break;
        }
    }

    // Longest stretch with both populations pinned near half the photons.
    const double band = det.band * target;
    const double span = tr.times.back() - tr.times.front();
    double best_len = -1.0;
    std::size_t run_start = n;
    for (std::size_t i = 0; i <= n; ++i) {
        const bool inside =
            i < n && std::abs(tr.n1_mean[i] - target) <= band &&
            std::abs(tr.n2_mean[i] - target) <= band;
        if (inside && run_start == n) run_start = i;
        if (!inside && run_start != n) {
            const double len = tr.times[i - 1] - tr.times[run_start];
            if (len > best_len) {
                best_len = len;
                sig.plateau_t0 = tr.times[run_start];
                sig.plateau_t1 = tr.times[i - 1];
            }
            run_start = n;
        }
    }
    sig.plateau_found = best_len >= det.window_frac * span;
    if (!sig.plateau_found) sig.plateau_t0 = sig.plateau_t1 = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        if (tr.n2_mean[i] >= level) {
            sig.classification = ParityClass::inversion;
            sig.event_time = tr.times[i];
            return sig;
        }
    }
    if (i_drop == n) {
        // Mode 1 never yielded even half its photons; nothing to give back.
        sig.classification = ParityClass::photon_return;
        return sig;
    }
    for (std::size_t i = i_drop; i < n; ++i) {
        if (tr.n1_mean[i] >= level) {
            sig.classification = ParityClass::photon_return;
            sig.event_time = tr.times[i];
            return sig;
        }
    }
    return sig;
}

ModelParams parity_default_params() {
    ModelParams p;
    p.g = Complex{0.0, 0.0};
    p.lambda1 = Complex{-0.5, 0.0};
    p.lambda2 = Complex{-0.5, 0.0};
    return p;
}

ParityResult parity_experiment(const ModelParams& p, int n0, double t_max,
                               int n_steps, int n_max,
                               const ParityDetector& det) {
    if (n0 < 0) throw std::invalid_argument("parity_experiment: n0 must be >= 0");
    if (n_max < 0) n_max = n0;
    if (n_max < n0) {
        throw std::invalid_argument(
            "parity_experiment: n_max = " + std::to_string(n_max) +
            " cannot hold the initial state; need at least n0 = " +
            std::to_string(n0));
    }
    p.validate();
    const HilbertSpec space = make_space(n_max);
    const OperatorMatrix h = build_quadratic_hamiltonian(space, p);
    const QuantumState psi0 = fock_state(space, n0, 0, Spin::down);
    const BlockDecomposition blocks =
        excitation_blocks(space, Conserved::total_excitation);
    EvolveOptions opts;
    opts.blocks = &blocks;
    ParityResult out;
    out.trajectory = evolve(space, h, psi0, time_grid(t_max, n_steps), opts);
    out.signature = classify_parity(out.trajectory, n0, det);
    return out;
}

Trajectory frame_evolve_oracle(const HilbertSpec& space, const ModelParams& p,
                               const QuantumState& psi0,
                               const std::vector<double>& times) {
    const ConstraintReport report = decoupling_constraints(p);
    if (!report.satisfied) {
        throw std::invalid_argument(
            "frame_evolve_oracle: parameters do not satisfy the decoupling "
            "relations, the two paths would not describe the same model");
    }
    const OperatorMatrix v = decoupling_unitary(space);
    const OperatorMatrix h_dec = build_decoupled_hamiltonian(space, p);

    QuantumState rotated;
    rotated.amplitudes = v.entries.adjoint() * psi0.amplitudes;
    EvolveOptions opts;
    opts.store_states = true;
    const BlockDecomposition blocks =
        excitation_blocks(space, Conserved::total_excitation);
    opts.blocks = &blocks;
    Trajectory inner = evolve(space, h_dec, rotated, times, opts);

    // Map each state back and recompute the observables in the lab frame.
    const DiagonalObservables obs(space);
    const double norm0 = psi0.norm();
    Trajectory tr;
    tr.times = times;
    for (const Vector& phi : inner.states) {
        Vector psi = v.entries * phi;
        append_observables(tr, psi, norm0, obs);
        tr.states.push_back(std::move(psi));
    }
    return tr;
}

}  // namespace bimodal
