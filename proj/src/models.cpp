#include "bimodal/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bimodal {

void ModelParams::validate() const {
    if (spin_ladder_scale <= 0.0) {
        throw std::invalid_argument("spin_ladder_scale must be positive");
    }
    if (enforce_resonance && omega0 != 2.0 * omega) {
        std::ostringstream msg;
        msg << "two-photon resonance violated: omega0 = " << omega0
            << " but 2*omega = " << 2.0 * omega
            << " (unset enforce_resonance to allow detuning)";
        throw std::invalid_argument(msg.str());
    }
}

const std::array<OperatorLabel, kOperatorLabelCount>& all_operator_labels() {
    static const std::array<OperatorLabel, kOperatorLabelCount> labels = {
        OperatorLabel::one,        OperatorLabel::sz,
        OperatorLabel::n1,         OperatorLabel::n2,
        OperatorLabel::n1_sz,      OperatorLabel::n2_sz,
        OperatorLabel::a1d_a2,     OperatorLabel::a2d_a1,
        OperatorLabel::a1d_a2_sz,  OperatorLabel::a2d_a1_sz,
        OperatorLabel::a1_a1,      OperatorLabel::a1d_a1d,
        OperatorLabel::a2_a2,      OperatorLabel::a2d_a2d,
        OperatorLabel::a1_a2,      OperatorLabel::a1d_a2d,
        OperatorLabel::a1_a1_sp,   OperatorLabel::a1d_a1d_sm,
        OperatorLabel::a2_a2_sp,   OperatorLabel::a2d_a2d_sm,
        OperatorLabel::a1_a2_sp,   OperatorLabel::a1d_a2d_sm,
    };
    return labels;
}

std::string_view label_name(OperatorLabel l) {
    switch (l) {
        case OperatorLabel::one: return "one";
        case OperatorLabel::sz: return "sz";
        case OperatorLabel::n1: return "n1";
        case OperatorLabel::n2: return "n2";
        case OperatorLabel::n1_sz: return "n1_sz";
        case OperatorLabel::n2_sz: return "n2_sz";
        case OperatorLabel::a1d_a2: return "a1d_a2";
        case OperatorLabel::a2d_a1: return "a2d_a1";
        case OperatorLabel::a1d_a2_sz: return "a1d_a2_sz";
        case OperatorLabel::a2d_a1_sz: return "a2d_a1_sz";
        case OperatorLabel::a1_a1: return "a1_a1";
        case OperatorLabel::a1d_a1d: return "a1d_a1d";
        case OperatorLabel::a2_a2: return "a2_a2";
        case OperatorLabel::a2d_a2d: return "a2d_a2d";
        case OperatorLabel::a1_a2: return "a1_a2";
        case OperatorLabel::a1d_a2d: return "a1d_a2d";
        case OperatorLabel::a1_a1_sp: return "a1_a1_sp";
        case OperatorLabel::a1d_a1d_sm: return "a1d_a1d_sm";
        case OperatorLabel::a2_a2_sp: return "a2_a2_sp";
        case OperatorLabel::a2d_a2d_sm: return "a2d_a2d_sm";
        case OperatorLabel::a1_a2_sp: return "a1_a2_sp";
        case OperatorLabel::a1d_a2d_sm: return "a1d_a2d_sm";
    }
    throw std::invalid_argument("unknown operator label");
}

OperatorLabel conjugate_label(OperatorLabel l) {
    switch (l) {
        case OperatorLabel::one:
        case OperatorLabel::sz:
        case OperatorLabel::n1:
        case OperatorLabel::n2:
        case OperatorLabel::n1_sz:
        case OperatorLabel::n2_sz:
            return l;
        case OperatorLabel::a1d_a2: return OperatorLabel::a2d_a1;
        case OperatorLabel::a2d_a1: return OperatorLabel::a1d_a2;
        case OperatorLabel::a1d_a2_sz: return OperatorLabel::a2d_a1_sz;
        case OperatorLabel::a2d_a1_sz: return OperatorLabel::a1d_a2_sz;
        case OperatorLabel::a1_a1: return OperatorLabel::a1d_a1d;
        case OperatorLabel::a1d_a1d: return OperatorLabel::a1_a1;
        case OperatorLabel::a2_a2: return OperatorLabel::a2d_a2d;
        case OperatorLabel::a2d_a2d: return OperatorLabel::a2_a2;
        case OperatorLabel::a1_a2: return OperatorLabel::a1d_a2d;
        case OperatorLabel::a1d_a2d: return OperatorLabel::a1_a2;
        case OperatorLabel::a1_a1_sp: return OperatorLabel::a1d_a1d_sm;
        case OperatorLabel::a1d_a1d_sm: return OperatorLabel::a1_a1_sp;
        case OperatorLabel::a2_a2_sp: return OperatorLabel::a2d_a2d_sm;
        case OperatorLabel::a2d_a2d_sm: return OperatorLabel::a2_a2_sp;
        case OperatorLabel::a1_a2_sp: return OperatorLabel::a1d_a2d_sm;
        case OperatorLabel::a1d_a2d_sm: return OperatorLabel::a1_a2_sp;
    }
    throw std::invalid_argument("unknown operator label");
}

namespace {

double sz_value(Spin sigma) { return sigma == Spin::up ? 0.5 : -0.5; }

// Matrix elements are placed directly from the ladder amplitudes, never by
// multiplying truncated factor matrices, so within the simplex every entry
// equals the untruncated operator's element (no boundary artifacts from
// dropped intermediate states).
Matrix diagonal_label(const HilbertSpec& space, OperatorLabel l) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        switch (l) {
            case OperatorLabel::one: m(j, j) = 1.0; break;
            case OperatorLabel::sz: m(j, j) = sz_value(k.sigma); break;
            case OperatorLabel::n1: m(j, j) = k.n1; break;
            case OperatorLabel::n2: m(j, j) = k.n2; break;
            case OperatorLabel::n1_sz: m(j, j) = k.n1 * sz_value(k.sigma); break;
            case OperatorLabel::n2_sz: m(j, j) = k.n2 * sz_value(k.sigma); break;
            default:
                throw std::logic_error("not a diagonal label");
        }
    }
    return m;
}

// a1' a2, optionally dressed with Sz. Photon-number conserving, so exact on
// the whole simplex.
Matrix hop_label(const HilbertSpec& space, bool dress_sz) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        if (k.n2 == 0) continue;
        const int i = space.index_of(k.n1 + 1, k.n2 - 1, k.sigma);
        double amp = std::sqrt(static_cast<double>(k.n1 + 1)) *
                     std::sqrt(static_cast<double>(k.n2));
        if (dress_sz) amp *= sz_value(k.sigma);
        m(i, j) = amp;
    }
    return m;
}

enum class PairKind { mode1, mode2, cross };

// Two-photon lowering (a1^2, a2^2 or a1 a2), optionally with a spin flip
// down -> up whose amplitude is ladder_scale.
Matrix pair_lower_label(const HilbertSpec& space, PairKind kind, bool spin_flip,
                        double ladder_scale) {
    Matrix m = Matrix::Zero(space.dimension(), space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        if (spin_flip && k.sigma != Spin::down) continue;
        int i = -1;
        double amp = 0.0;
        switch (kind) {
            case PairKind::mode1:
                if (k.n1 < 2) continue;
                i = space.index_of(k.n1 - 2, k.n2, spin_flip ? Spin::up : k.sigma);
                amp = std::sqrt(static_cast<double>(k.n1)) *
                      std::sqrt(static_cast<double>(k.n1 - 1));
                break;
            case PairKind::mode2:
                if (k.n2 < 2) continue;
                i = space.index_of(k.n1, k.n2 - 2, spin_flip ? Spin::up : k.sigma);
                amp = std::sqrt(static_cast<double>(k.n2)) *
                      std::sqrt(static_cast<double>(k.n2 - 1));
                break;
            case PairKind::cross:
                if (k.n1 < 1 || k.n2 < 1) continue;
                i = space.index_of(k.n1 - 1, k.n2 - 1, spin_flip ? Spin::up : k.sigma);
                amp = std::sqrt(static_cast<double>(k.n1)) *
                      std::sqrt(static_cast<double>(k.n2));
                break;
        }
        if (spin_flip) amp *= ladder_scale;
        m(i, j) = amp;
    }
    return m;
}

Matrix label_operator_scaled(const HilbertSpec& space, OperatorLabel l,
                             double ladder_scale) {
    switch (l) {
        case OperatorLabel::one:
        case OperatorLabel::sz:
        case OperatorLabel::n1:
        case OperatorLabel::n2:
        case OperatorLabel::n1_sz:
        case OperatorLabel::n2_sz:
            return diagonal_label(space, l);
        case OperatorLabel::a1d_a2: return hop_label(space, false);
        case OperatorLabel::a2d_a1: return hop_label(space, false).adjoint();
        case OperatorLabel::a1d_a2_sz: return hop_label(space, true);
        case OperatorLabel::a2d_a1_sz: return hop_label(space, true).adjoint();
        case OperatorLabel::a1_a1:
            return pair_lower_label(space, PairKind::mode1, false, ladder_scale);
        case OperatorLabel::a1d_a1d:
            return pair_lower_label(space, PairKind::mode1, false, ladder_scale).adjoint();
        case OperatorLabel::a2_a2:
            return pair_lower_label(space, PairKind::mode2, false, ladder_scale);
        case OperatorLabel::a2d_a2d:
            return pair_lower_label(space, PairKind::mode2, false, ladder_scale).adjoint();
        case OperatorLabel::a1_a2:
            return pair_lower_label(space, PairKind::cross, false, ladder_scale);
        case OperatorLabel::a1d_a2d:
            return pair_lower_label(space, PairKind::cross, false, ladder_scale).adjoint();
        case OperatorLabel::a1_a1_sp:
            return pair_lower_label(space, PairKind::mode1, true, ladder_scale);
        case OperatorLabel::a1d_a1d_sm:
            return pair_lower_label(space, PairKind::mode1, true, ladder_scale).adjoint();
        case OperatorLabel::a2_a2_sp:
            return pair_lower_label(space, PairKind::mode2, true, ladder_scale);
        case OperatorLabel::a2d_a2d_sm:
            return pair_lower_label(space, PairKind::mode2, true, ladder_scale).adjoint();
        case OperatorLabel::a1_a2_sp:
            return pair_lower_label(space, PairKind::cross, true, ladder_scale);
        case OperatorLabel::a1d_a2d_sm:
            return pair_lower_label(space, PairKind::cross, true, ladder_scale).adjoint();
    }
    throw std::invalid_argument("unknown operator label");
}

// H += c * M + conj(c) * M'. Assembling both partners from the same float
// matrix keeps the result hermitian bit for bit.
void add_pair(Matrix& h, const Complex& c, const Matrix& m) {
    h += c * m;
    h += std::conj(c) * m.adjoint();
}

}  // namespace

Matrix label_operator(const HilbertSpec& space, OperatorLabel l) {
    return label_operator_scaled(space, l, 1.0);
}

OperatorMatrix build_linear_hamiltonian(const HilbertSpec& space, const ModelParams& p) {
    p.validate();
    const int d = space.dimension();
    Matrix h = Matrix::Zero(d, d);
    h += p.omega0 * diagonal_label(space, OperatorLabel::sz);
    h += p.omega * (diagonal_label(space, OperatorLabel::n1) +
                    diagonal_label(space, OperatorLabel::n2));
    // g a' S- raises a photon while de-exciting the atom.
    for (int mode : {1, 2}) {
        Matrix lower = Matrix::Zero(d, d);
        for (int j = 0; j < d; ++j) {
            const BasisKet& k = space.ket(j);
            if (k.sigma != Spin::up) continue;
            const int up1 = (mode == 1) ? k.n1 + 1 : k.n1;
            const int up2 = (mode == 2) ? k.n2 + 1 : k.n2;
            if (!space.contains(up1, up2)) continue;
            const int i = space.index_of(up1, up2, Spin::down);
            lower(i, j) = std::sqrt(static_cast<double>((mode == 1) ? up1 : up2)) *
                          p.spin_ladder_scale;
        }
        add_pair(h, (mode == 1) ? p.g1 : p.g2, lower);
    }
    OperatorMatrix op(std::move(h));
    op.certify_hermitian();
    return op;
}

OperatorMatrix build_quadratic_hamiltonian(const HilbertSpec& space, const ModelParams& p) {
    p.validate();
    const int d = space.dimension();
    Matrix h = Matrix::Zero(d, d);
    h += p.omega0 * diagonal_label(space, OperatorLabel::sz);
    h += p.omega * (diagonal_label(space, OperatorLabel::n1) +
                    diagonal_label(space, OperatorLabel::n2));
    h += p.s * (diagonal_label(space, OperatorLabel::n1_sz) +
                diagonal_label(space, OperatorLabel::n2_sz));
    add_pair(h, Complex(p.r1, 0.0), hop_label(space, false));
    add_pair(h, Complex(p.r2, 0.0), hop_label(space, true));
    add_pair(h, p.lambda1,
             pair_lower_label(space, PairKind::mode1, true, p.spin_ladder_scale));
    add_pair(h, p.lambda2,
             pair_lower_label(space, PairKind::mode2, true, p.spin_ladder_scale));
    add_pair(h, p.g,
             pair_lower_label(space, PairKind::cross, true, p.spin_ladder_scale));
    OperatorMatrix op(std::move(h));
    op.certify_hermitian();
    return op;
}

namespace {

void require_decoupling_params(const ModelParams& p) {
    const double tol = 1e-12 * std::max(1.0, std::abs(p.g));
    if (std::abs(p.lambda1 - p.lambda2) > tol) {
        std::ostringstream msg;
        msg << "decoupled form requires lambda1 == lambda2, but |lambda1 - lambda2| = "
            << std::abs(p.lambda1 - p.lambda2);
        throw std::invalid_argument(msg.str());
    }
    if (std::abs(p.lambda1 + 0.5 * p.g) > tol) {
        std::ostringstream msg;
        msg << "decoupled form requires lambda1 == -g/2, but |lambda1 + g/2| = "
            << std::abs(p.lambda1 + 0.5 * p.g);
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

OperatorMatrix build_decoupled_hamiltonian(const HilbertSpec& space, const ModelParams& p) {
    p.validate();
    require_decoupling_params(p);
    const int d = space.dimension();
    Matrix h = Matrix::Zero(d, d);
    h += p.omega0 * diagonal_label(space, OperatorLabel::sz);
    h += (p.omega - p.r1) * diagonal_label(space, OperatorLabel::n1);
    h += (p.s - p.r2) * diagonal_label(space, OperatorLabel::n1_sz);
    h += (p.omega + p.r1) * diagonal_label(space, OperatorLabel::n2);
    h += (p.s + p.r2) * diagonal_label(space, OperatorLabel::n2_sz);
    add_pair(h, 2.0 * p.lambda1,
             pair_lower_label(space, PairKind::mode1, true, p.spin_ladder_scale));
    OperatorMatrix op(std::move(h));
    op.certify_hermitian();
    return op;
}

OperatorMatrix build_reduced_jcm(const SingleModeSpec& space, const ModelParams& p, int n2) {
    p.validate();
    require_decoupling_params(p);
    if (n2 < 0) {
        throw std::invalid_argument("spectator occupation n2 must be non-negative");
    }
    const int d = space.dimension();
    Matrix h = Matrix::Zero(d, d);
    Matrix pair_lower = Matrix::Zero(d, d);
    for (int n = 0; n <= space.n_max(); ++n) {
        for (Spin sigma : {Spin::down, Spin::up}) {
            const int j = space.index_of(n, sigma);
            const double sz = sz_value(sigma);
            h(j, j) = (p.omega0 + n2 * (p.s + p.r2)) * sz + (p.omega + p.r1) * n2 +
                      (p.omega - p.r1) * n + (p.s - p.r2) * n * sz;
        }
        if (n >= 2) {
            pair_lower(space.index_of(n - 2, Spin::up), space.index_of(n, Spin::down)) =
                std::sqrt(static_cast<double>(n)) *
                std::sqrt(static_cast<double>(n - 1)) * p.spin_ladder_scale;
        }
    }
    add_pair(h, 2.0 * p.lambda1, pair_lower);
    OperatorMatrix op(std::move(h));
    op.certify_hermitian();
    return op;
}

Complex CoefficientTable::coeff(OperatorLabel l) const {
    auto it = coefficients.find(l);
    return it == coefficients.end() ? Complex(0.0, 0.0) : it->second;
}

double CoefficientTable::hermiticity_defect() const {
    double worst = 0.0;
    for (OperatorLabel l : all_operator_labels()) {
        worst = std::max(worst,
                         std::abs(coeff(l) - std::conj(coeff(conjugate_label(l)))));
    }
    return worst;
}

CoefficientExtraction extract_coefficients(const HilbertSpec& space, const Matrix& h,
                                           const ExtractOptions& opts) {
    if (h.rows() != space.dimension() || h.cols() != space.dimension()) {
        throw std::invalid_argument("matrix dimension does not match the space");
    }
    if (space.n_max() < 4) {
        throw std::invalid_argument(
            "coefficient extraction needs n_max >= 4 so every basis operator has "
            "interior support");
    }

    std::vector<int> interior;
    for (int j = 0; j < space.dimension(); ++j) {
        if (total_photons(space.ket(j)) <= space.n_max() - 2) interior.push_back(j);
    }
    const auto m = static_cast<Eigen::Index>(interior.size());

    auto gather = [&](const Matrix& full) {
        Matrix sub(m, m);
        for (Eigen::Index c = 0; c < m; ++c) {
            for (Eigen::Index r = 0; r < m; ++r) {
                sub(r, c) = full(interior[static_cast<std::size_t>(r)],
                                 interior[static_cast<std::size_t>(c)]);
            }
        }
        return sub;
    };

    const auto& labels = all_operator_labels();
    Matrix design(m * m, kOperatorLabelCount);
    for (int col = 0; col < kOperatorLabelCount; ++col) {
        Matrix sub = gather(label_operator(space, labels[static_cast<std::size_t>(col)]));
        design.col(col) = Eigen::Map<const Vector>(sub.data(), m * m);
    }
    Matrix h_sub = gather(h);
    Vector target = Eigen::Map<const Vector>(h_sub.data(), m * m);

    Vector solution = design.colPivHouseholderQr().solve(target);
    Vector residual = target - design * solution;

    CoefficientExtraction out;
    out.scale = max_abs(h);
    out.residual_max = max_abs(residual);
    for (int col = 0; col < kOperatorLabelCount; ++col) {
        out.table.coefficients[labels[static_cast<std::size_t>(col)]] = solution(col);
    }

    const double tol = opts.tol_rel * (out.scale > 0.0 ? out.scale : 1.0);
    if (opts.enforce_family && out.residual_max > tol) {
        // Rank the unexplained entries so the caller sees where the fit broke.
        std::vector<Eigen::Index> order(static_cast<std::size_t>(residual.size()));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(residual(a)) > std::abs(residual(b));
        });
        std::ostringstream msg;
        msg << "matrix is not in the quadratic operator family: max residual "
            << out.residual_max << " exceeds " << tol << "; largest unexplained entries:";
        const std::size_t n_show = std::min<std::size_t>(3, order.size());
        for (std::size_t i = 0; i < n_show; ++i) {
            const Eigen::Index flat = order[i];
            const int row = interior[static_cast<std::size_t>(flat % m)];
            const int col = interior[static_cast<std::size_t>(flat / m)];
            msg << " <" << ket_label(space.ket(row)) << "|H" << ket_label(space.ket(col))
                << " residual " << std::abs(residual(flat)) << ";";
        }
        throw std::runtime_error(msg.str());
    }
    return out;
}

}  // namespace bimodal
