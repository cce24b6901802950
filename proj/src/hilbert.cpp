#include "bimodal/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace bimodal {

HilbertSpec::HilbertSpec(int n_max) : n_max_(n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("n_max must be non-negative, got " +
                                    std::to_string(n_max));
    }
    basis_.reserve(static_cast<std::size_t>((n_max + 1) * (n_max + 2)));
    for (int total = 0; total <= n_max; ++total) {
        for (int n1 = 0; n1 <= total; ++n1) {
            basis_.push_back({n1, total - n1, Spin::down});
            basis_.push_back({n1, total - n1, Spin::up});
        }
    }
}

const BasisKet& HilbertSpec::ket(int index) const {
    if (index < 0 || index >= dimension()) {
        throw std::out_of_range("basis index " + std::to_string(index) +
                                " outside dimension " + std::to_string(dimension()));
    }
    return basis_[static_cast<std::size_t>(index)];
}

bool HilbertSpec::contains(int n1, int n2) const {
    return n1 >= 0 && n2 >= 0 && n1 + n2 <= n_max_;
}

int HilbertSpec::index_of(int n1, int n2, Spin sigma) const {
    if (!contains(n1, n2)) {
        throw std::out_of_range("state (" + std::to_string(n1) + "," +
                                std::to_string(n2) + ") outside the n1+n2 <= " +
                                std::to_string(n_max_) + " simplex");
    }
    const int total = n1 + n2;
    return total * (total + 1) + 2 * n1 + static_cast<int>(sigma);
}

HilbertSpec make_space(int n_max) { return HilbertSpec(n_max); }

int total_photons(const BasisKet& k) { return k.n1 + k.n2; }

int total_excitation(const BasisKet& k) {
    return k.n1 + k.n2 + (k.sigma == Spin::up ? 2 : 0);
}

std::string ket_label(const BasisKet& k) {
    return "|" + std::to_string(k.n1) + "," + std::to_string(k.n2) +
           (k.sigma == Spin::up ? ",+>" : ",->");
}

OperatorMatrix identity_op(const HilbertSpec& space) {
    OperatorMatrix op(Matrix(Matrix::Identity(space.dimension(), space.dimension())));
    op.hermitian = true;
    return op;
}

namespace {

void check_mode(int mode) {
    if (mode != 1 && mode != 2) {
        throw std::invalid_argument("mode must be 1 or 2, got " + std::to_string(mode));
    }
}

}  // namespace

OperatorMatrix annihilator(const HilbertSpec& space, int mode) {
    check_mode(mode);
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        const int n = (mode == 1) ? k.n1 : k.n2;
        if (n == 0) continue;
        const int i = (mode == 1) ? space.index_of(k.n1 - 1, k.n2, k.sigma)
                                  : space.index_of(k.n1, k.n2 - 1, k.sigma);
        m(i, j) = std::sqrt(static_cast<double>(n));
    }
    return OperatorMatrix(std::move(m));
}

OperatorMatrix creator(const HilbertSpec& space, int mode) {
    return annihilator(space, mode).adjoint();
}

OperatorMatrix number_op(const HilbertSpec& space, int mode) {
    check_mode(mode);
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        m(j, j) = static_cast<double>((mode == 1) ? k.n1 : k.n2);
    }
    OperatorMatrix op(std::move(m));
    op.hermitian = true;
    return op;
}

OperatorMatrix spin_operator(const HilbertSpec& space, SpinComponent c,
                             double ladder_scale) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        switch (c) {
            case SpinComponent::z:
                m(j, j) = (k.sigma == Spin::up) ? 0.5 : -0.5;
                break;
            case SpinComponent::plus:
                if (k.sigma == Spin::down) {
                    m(space.index_of(k.n1, k.n2, Spin::up), j) = ladder_scale;
                }
                break;
            case SpinComponent::minus:
                if (k.sigma == Spin::up) {
                    m(space.index_of(k.n1, k.n2, Spin::down), j) = ladder_scale;
                }
                break;
        }
    }
    OperatorMatrix op(std::move(m));
    if (c == SpinComponent::z) op.hermitian = true;
    return op;
}

OperatorMatrix total_excitation_op(const HilbertSpec& space) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        m(j, j) = static_cast<double>(total_excitation(space.ket(j)));
    }
    OperatorMatrix op(std::move(m));
    op.hermitian = true;
    return op;
}

BlockDecomposition excitation_blocks(const HilbertSpec& space, Conserved kind) {
    std::map<int, std::vector<int>> by_value;
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        const int value = (kind == Conserved::total_photon) ? total_photons(k)
                                                            : total_excitation(k);
        by_value[value].push_back(j);
    }
    BlockDecomposition out;
    out.kind = kind;
    out.blocks.reserve(by_value.size());
    for (auto& [value, indices] : by_value) {
        out.blocks.push_back({value, std::move(indices)});
    }
    return out;
}

Matrix restrict_to_block(const Matrix& m, const Block& b) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    Matrix out(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            out(r, c) = m(b.indices[static_cast<std::size_t>(r)],
                          b.indices[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

void embed_block(Matrix& dest, const Matrix& block_m, const Block& b) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    if (block_m.rows() != n || block_m.cols() != n) {
        throw std::invalid_argument("block matrix shape does not match block index count");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            dest(b.indices[static_cast<std::size_t>(r)],
                 b.indices[static_cast<std::size_t>(c)]) = block_m(r, c);
        }
    }
}

SingleModeSpec::SingleModeSpec(int n_max) : n_max_(n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("n_max must be non-negative, got " +
                                    std::to_string(n_max));
    }
}

int SingleModeSpec::index_of(int n, Spin sigma) const {
    if (n < 0 || n > n_max_) {
        throw std::out_of_range("occupation " + std::to_string(n) +
                                " outside cutoff " + std::to_string(n_max_));
    }
    return 2 * n + static_cast<int>(sigma);
}

SingleModeSpec make_single_mode_space(int n_max) { return SingleModeSpec(n_max); }

OperatorMatrix sm_identity(const SingleModeSpec& space) {
    OperatorMatrix op(Matrix(Matrix::Identity(space.dimension(), space.dimension())));
    op.hermitian = true;
    return op;
}

OperatorMatrix sm_annihilator(const SingleModeSpec& space) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int n = 1; n <= space.n_max(); ++n) {
        for (Spin sigma : {Spin::down, Spin::up}) {
            m(space.index_of(n - 1, sigma), space.index_of(n, sigma)) =
                std::sqrt(static_cast<double>(n));
        }
    }
    return OperatorMatrix(std::move(m));
}

OperatorMatrix sm_number(const SingleModeSpec& space) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int n = 0; n <= space.n_max(); ++n) {
        for (Spin sigma : {Spin::down, Spin::up}) {
            const int j = space.index_of(n, sigma);
            m(j, j) = static_cast<double>(n);
        }
    }
    OperatorMatrix op(std::move(m));
    op.hermitian = true;
    return op;
}

OperatorMatrix sm_spin(const SingleModeSpec& space, SpinComponent c,
                       double ladder_scale) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int n = 0; n <= space.n_max(); ++n) {
        switch (c) {
            case SpinComponent::z:
                m(space.index_of(n, Spin::down), space.index_of(n, Spin::down)) = -0.5;
                m(space.index_of(n, Spin::up), space.index_of(n, Spin::up)) = 0.5;
                break;
            case SpinComponent::plus:
                m(space.index_of(n, Spin::up), space.index_of(n, Spin::down)) = ladder_scale;
                break;
            case SpinComponent::minus:
                m(space.index_of(n, Spin::down), space.index_of(n, Spin::up)) = ladder_scale;
                break;
        }
    }
    OperatorMatrix op(std::move(m));
    if (c == SpinComponent::z) op.hermitian = true;
    return op;
}

}  // namespace bimodal
