#pragma once

#include <string_view>
#include <vector>

#include "bimodal/hilbert.hpp"
#include "bimodal/linalg.hpp"
#include "bimodal/models.hpp"

namespace bimodal {

struct QuantumState {
    Vector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

// |n1, n2, sigma>; throws std::out_of_range outside the simplex.
QuantumState fock_state(const HilbertSpec& space, int n1, int n2, Spin sigma);

// Two-mode coherent amplitudes truncated to the simplex and renormalized
// there, atom in the given state. For |alpha|^2 comparable to n_max the
// truncation bites; callers wanting the untruncated state must enlarge n_max.
QuantumState coherent_state(const HilbertSpec& space, Complex alpha1,
                            Complex alpha2, Spin sigma);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> n1_mean;
    std::vector<double> n2_mean;
    std::vector<double> sz_mean;
    std::vector<double> excitation;  // <n1 + n2 + 2(Sz + 1/2)>
    std::vector<double> norm_err;    // | ||psi(t)|| - ||psi(0)|| |
    std::vector<Vector> states;      // filled only on request
};

struct EvolveOptions {
    // When given, the evolution is done per block (each block diagonalized
    // independently); the Hamiltonian is checked to actually be
    // block-diagonal in that decomposition.
    const BlockDecomposition* blocks = nullptr;
    bool store_states = false;
};

// Exact psi(t) = exp(-i H t) psi0 by eigendecomposition — never a series or
// a stepper, so any t is equally accurate. H must certify hermitian and
// psi0 must be nonzero; expectation values are normalized by <psi|psi>.
Trajectory evolve(const HilbertSpec& space, const OperatorMatrix& h,
                  const QuantumState& psi0, const std::vector<double>& times,
                  const EvolveOptions& opts = {});

// n_steps + 1 uniform points covering [0, t_max]; just {0} when t_max is 0.
std::vector<double> time_grid(double t_max, int n_steps);

enum class ParityClass { inversion, photon_return, undecided };

// Serialized spellings: "INVERSION", "RETURN", "UNDECIDED".
std::string_view parity_class_name(ParityClass c);

// Heuristic knobs for reading a population trajectory. Defaults were
// calibrated on exact trajectories for n0 = 1..8 at the default experiment
// parameters: even n0 reaches <n2> >= 0.887*n0 at its revival while odd n0
// stays below 0.686*n0 forever (photon pairs cannot move a lone photon), so
// the 0.80 dominance line splits the parities with at least a 0.4-photon
// margin on either side.
struct ParityDetector {
    double band = 0.15;         // plateau half-width, relative to n0/2
    double window_frac = 0.10;  // minimum plateau length, relative to t_max
    double dominance = 0.80;    // event level, relative to n0
};

struct ParitySignature {
    ParityClass classification = ParityClass::undecided;
    // First time <n1> falls to n0/2; negative when that never happens.
    double drop_time = -1.0;
    // Longest stretch with both modes inside the band around n0/2; reported
    // when it is at least window_frac of the horizon. Small n0 rarely shows
    // one — the flat half-half plateau is a large-n0 feature.
    bool plateau_found = false;
    double plateau_t0 = 0.0;
    double plateau_t1 = 0.0;
    // First crossing that decided the classification; negative when the
    // verdict needed no event (stationary RETURN) or is UNDECIDED.
    double event_time = -1.0;
};

// INVERSION wins if <n2> ever reaches dominance*n0 within the horizon (for
// even n0 the roles of the modes genuinely swap at a revival; odd n0 cannot
// get there, one photon being stuck in mode 1). Otherwise RETURN if <n1>
// recovers to dominance*n0 after first dropping to n0/2, or never drops at
// all. Otherwise UNDECIDED (usually: horizon too short). n0 = 0 is
// degenerate and always UNDECIDED.
ParitySignature classify_parity(const Trajectory& tr, int n0,
                                const ParityDetector& det = {});

struct ParityResult {
    Trajectory trajectory;
    ParitySignature signature;
};

// Parameters under which the even/odd effect actually shows: pure two-photon
// couplings (g = 0, lambda1 = lambda2 = -1/2, resonant frequencies). With a
// nonzero cross coupling g the pair a1 a2 S+ moves single photons between the
// modes and the parity protection is lost — that regime is the decoupling
// story, not this one.
ModelParams parity_default_params();

inline constexpr double kParityDefaultTMax = 80.0;
inline constexpr int kParityDefaultSteps = 8000;

// Evolves |n0, 0, down> under the quadratic model and classifies the
// trajectory. n_max = -1 selects n0, which is exact: the evolution stays on
// total-excitation blocks that the simplex already contains completely.
// Throws std::invalid_argument for n_max < n0.
ParityResult parity_experiment(const ModelParams& p, int n0, double t_max,
                               int n_steps, int n_max = -1,
                               const ParityDetector& det = {});

// Independent second path for the same dynamics: conjugate the state into
// the decoupled frame, evolve under the decoupled Hamiltonian, map back.
// Requires parameters satisfying the decoupling relations. The returned
// trajectory always carries the lab-frame states, so the two paths can be
// compared vector by vector.
Trajectory frame_evolve_oracle(const HilbertSpec& space, const ModelParams& p,
                               const QuantumState& psi0,
                               const std::vector<double>& times);

}  // namespace bimodal
