#include "bimodal/decoupling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bimodal {

namespace {

constexpr double kPi = std::numbers::pi;

const Complex kI{0.0, 1.0};

// Exponential of a hermitian matrix times a phase: exp(i sign * H), computed
// by eigendecomposition so unitarity is limited only by the solver.
Matrix expi_hermitian(const Matrix& h, double sign) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }
    const auto& u = es.eigenvectors();
    Vector phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::exp(kI * (sign * es.eigenvalues()(i)));
    }
    return u * phases.asDiagonal() * u.adjoint();
}

// Per-shell exponential of a photon-number-conserving hermitian generator.
Matrix expi_per_shell(const HilbertSpec& space, const Matrix& h, double sign) {
    Matrix out = Matrix::Zero(space.dimension(), space.dimension());
    const BlockDecomposition shells = excitation_blocks(space, Conserved::total_photon);
    for (const Block& b : shells.blocks) {
        embed_block(out, expi_hermitian(restrict_to_block(h, b), sign), b);
    }
    return out;
}

}  // namespace

double ModeMap::unitarity_residual() const {
    Eigen::Matrix2cd gram = m.adjoint() * m;
    gram(0, 0) -= 1.0;
    gram(1, 1) -= 1.0;
    return gram.cwiseAbs().maxCoeff();
}

ModeMap mode_map(double theta, double eta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Complex e = std::exp(-kI * eta);
    ModeMap map;
    map.m(0, 0) = c * c + e * (s * s);
    map.m(0, 1) = c * s * (1.0 - e);
    map.m(1, 0) = c * s * (e - 1.0);
    map.m(1, 1) = -(e * (c * c) + s * s);
    return map;
}

OperatorMatrix beam_splitter(const HilbertSpec& space, double theta) {
    // Generator theta (a1' a2 - a1 a2') is antihermitian; i times it is
    // hermitian, and exp(G) = exp(-i (iG)).
    const Matrix hop = label_operator(space, OperatorLabel::a1d_a2);
    const Matrix herm = kI * theta * (hop - hop.adjoint());
    return OperatorMatrix(expi_per_shell(space, herm, -1.0));
}

GeneratorCoefficients rotate_generator(const GeneratorCoefficients& gen, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double s2 = std::sin(2.0 * theta);
    const double c2 = std::cos(2.0 * theta);
    GeneratorCoefficients out;
    out.omega1 = gen.omega1 * c * c + gen.omega2 * s * s - gen.lambda * s2;
    out.omega2 = gen.omega1 * s * s + gen.omega2 * c * c + gen.lambda * s2;
    out.lambda = 0.5 * (gen.omega1 - gen.omega2) * s2 + gen.lambda * c2;
    return out;
}

DiagonalAngle solve_diagonal_angle(const GeneratorCoefficients& gen) {
    if (gen.omega1 == gen.omega2) {
        if (gen.lambda == 0.0) return {0.0, true};
        return {0.25 * kPi, false};
    }
    return {0.5 * std::atan(2.0 * gen.lambda / (gen.omega2 - gen.omega1)), false};
}

TransformParams transform_params(const GeneratorCoefficients& gen) {
    TransformParams tp;
    tp.gen = gen;
    tp.theta = solve_diagonal_angle(gen).theta;
    const GeneratorCoefficients rotated = rotate_generator(gen, tp.theta);
    tp.eta = rotated.omega1 - rotated.omega2;
    return tp;
}

TransformParams transform_for_mode_map(double mode_angle, double eta) {
    TransformParams tp;
    tp.theta = -0.5 * mode_angle;
    tp.eta = eta;
    const double c2 = std::cos(2.0 * tp.theta);
    const double s2 = std::sin(2.0 * tp.theta);
    tp.gen.omega1 = eta * c2;
    tp.gen.omega2 = 0.0;
    tp.gen.lambda = -0.5 * eta * s2;
    return tp;
}

double realized_mode_angle(const TransformParams& tp) { return -2.0 * tp.theta; }

ModeMap realized_mode_map(const TransformParams& tp) {
    return mode_map(realized_mode_angle(tp), tp.eta);
}

OperatorMatrix mixing_generator(const HilbertSpec& space, const GeneratorCoefficients& gen) {
    Matrix k = gen.omega1 * label_operator(space, OperatorLabel::n1) +
               gen.omega2 * label_operator(space, OperatorLabel::n2);
    const Matrix hop = label_operator(space, OperatorLabel::a1d_a2);
    k += gen.lambda * (hop + hop.adjoint());
    OperatorMatrix op(std::move(k));
    op.certify_hermitian();
    return op;
}

OperatorMatrix transform_unitary(const HilbertSpec& space, const TransformParams& tp) {
    const double scale = std::max({std::abs(tp.gen.omega1), std::abs(tp.gen.omega2),
                                   std::abs(tp.gen.lambda), 1.0});
    const GeneratorCoefficients rotated = rotate_generator(tp.gen, tp.theta);
    if (std::abs(rotated.lambda) > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "theta does not diagonalize the generator: residual hopping coefficient "
            << std::abs(rotated.lambda);
        throw std::invalid_argument(msg.str());
    }
    const double eta_assembled = rotated.omega1 - rotated.omega2;
    // Compare as phases: eta only enters through exp(-i eta).
    if (std::abs(std::exp(-kI * tp.eta) - std::exp(-kI * eta_assembled)) > 1e-9) {
        std::ostringstream msg;
        msg << "eta inconsistent with the rotated generator: expected phase difference "
            << eta_assembled << ", got " << tp.eta;
        throw std::invalid_argument(msg.str());
    }

    const Matrix exp_ik =
        expi_per_shell(space, mixing_generator(space, tp.gen).entries, 1.0);

    Vector phase(space.dimension());
    for (int j = 0; j < space.dimension(); ++j) {
        const BasisKet& k = space.ket(j);
        // exp(-i pi n2) is exactly +/-1; fold it in by parity rather than
        // rounding a trig call.
        const double parity = (k.n2 % 2 == 0) ? 1.0 : -1.0;
        phase(j) = parity * std::exp(-kI * (rotated.omega1 *
                                            static_cast<double>(total_photons(k))));
    }
    return OperatorMatrix(Matrix(phase.asDiagonal() * exp_ik));
}

ConstraintReport decoupling_constraints(const ModelParams& p) {
    ConstraintReport report;
    report.required_mode_angle = 0.25 * kPi;
    report.required_eta = kPi;
    report.suggested_lambda = -0.5 * p.g;
    // Images of the pair couplings under the rotation by pi/4: the spectator
    // pair coefficient, the cross pair coefficient, and the mode-exchange
    // rotation alignment (identically zero at the required angle).
    report.relation_values[0] = 0.5 * (p.lambda1 + p.lambda2 + p.g);
    report.relation_values[1] = p.lambda1 - p.lambda2;
    report.relation_values[2] = Complex(std::cos(2.0 * report.required_mode_angle), 0.0);
    report.tolerance =
        1e-12 * std::max({1.0, std::abs(p.g), std::abs(p.lambda1), std::abs(p.lambda2)});
    report.satisfied = true;
    for (std::size_t i = 0; i < 3; ++i) {
        report.residuals[i] = std::abs(report.relation_values[i]);
        if (report.residuals[i] > report.tolerance) report.satisfied = false;
    }
    return report;
}

TransformParams decoupling_transform() {
    return transform_for_mode_map(0.25 * kPi, kPi);
}

OperatorMatrix decoupling_unitary(const HilbertSpec& space) {
    return transform_unitary(space, decoupling_transform());
}

OperatorMatrix conjugate_frame(const OperatorMatrix& u, const OperatorMatrix& h) {
    if (u.dimension() != h.dimension()) {
        throw std::invalid_argument("frame and operator dimensions differ");
    }
    const double res = unitarity_residual(u.entries);
    if (res > 1e-8) {
        std::ostringstream msg;
        msg << "frame transform is not unitary: residual " << res;
        throw std::invalid_argument(msg.str());
    }
    OperatorMatrix out(Matrix(u.entries.adjoint() * h.entries * u.entries));
    out.certify_hermitian();
    return out;
}

}  // namespace bimodal
