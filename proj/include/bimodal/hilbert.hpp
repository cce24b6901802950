#pragma once

#include <string>
#include <vector>

#include "bimodal/linalg.hpp"

namespace bimodal {

enum class Spin : int { down = 0, up = 1 };

struct BasisKet {
    int n1;
    int n2;
    Spin sigma;
};

// Two boson modes coupled to a two-level atom, truncated on the simplex
// n1 + n2 <= n_max. Truncating on total photon number (rather than per mode)
// keeps every total-photon shell complete, so any operator that conserves
// n1 + n2 is represented on this space without truncation error.
//
// Basis order is part of the output contract (golden files depend on it):
// states are sorted by (n1 + n2, n1, sigma) with sigma = down before up, i.e.
// index(n1, n2, sigma) = N(N+1) + 2*n1 + sigma  with  N = n1 + n2.
class HilbertSpec {
public:
    explicit HilbertSpec(int n_max);

    int n_max() const { return n_max_; }
    int dimension() const { return static_cast<int>(basis_.size()); }

    const BasisKet& ket(int index) const;
    const std::vector<BasisKet>& basis() const { return basis_; }

    bool contains(int n1, int n2) const;
    int index_of(int n1, int n2, Spin sigma) const;  // throws std::out_of_range outside the simplex

private:
    int n_max_;
    std::vector<BasisKet> basis_;
};

HilbertSpec make_space(int n_max);  // throws std::invalid_argument for n_max < 0

int total_photons(const BasisKet& k);

// Quanta counted so that a flipped atom is worth two photons; conserved by the
// quadratic model, which trades photon pairs against one atomic flip.
int total_excitation(const BasisKet& k);

std::string ket_label(const BasisKet& k);  // "|n1,n2,->" / "|n1,n2,+>"

OperatorMatrix identity_op(const HilbertSpec& space);
OperatorMatrix annihilator(const HilbertSpec& space, int mode);  // mode is 1 or 2
OperatorMatrix creator(const HilbertSpec& space, int mode);
OperatorMatrix number_op(const HilbertSpec& space, int mode);

enum class SpinComponent { z, plus, minus };

// ladder_scale rescales the ladder amplitude: S+ |down> = ladder_scale |up>.
// The default 1 is the convention assumed by every builder and test; the knob
// exists so the alternative 1/2 convention can be swapped in globally.
OperatorMatrix spin_operator(const HilbertSpec& space, SpinComponent c,
                             double ladder_scale = 1.0);

OperatorMatrix total_excitation_op(const HilbertSpec& space);

enum class Conserved { total_photon, total_excitation };

struct Block {
    int value;                 // conserved eigenvalue shared by the block
    std::vector<int> indices;  // ascending basis indices
};

struct BlockDecomposition {
    Conserved kind;
    std::vector<Block> blocks;  // sorted by value; indices partition the space
};

BlockDecomposition excitation_blocks(const HilbertSpec& space, Conserved kind);

Matrix restrict_to_block(const Matrix& m, const Block& b);
void embed_block(Matrix& dest, const Matrix& block_m, const Block& b);

// One boson mode plus the atom, used by the reduced single-mode models.
// Basis order: (n, sigma) with sigma = down before up.
class SingleModeSpec {
public:
    explicit SingleModeSpec(int n_max);

    int n_max() const { return n_max_; }
    int dimension() const { return 2 * (n_max_ + 1); }
    int index_of(int n, Spin sigma) const;

private:
    int n_max_;
};

SingleModeSpec make_single_mode_space(int n_max);

OperatorMatrix sm_identity(const SingleModeSpec& space);
OperatorMatrix sm_annihilator(const SingleModeSpec& space);
OperatorMatrix sm_number(const SingleModeSpec& space);
OperatorMatrix sm_spin(const SingleModeSpec& space, SpinComponent c,
                       double ladder_scale = 1.0);

}  // namespace bimodal
