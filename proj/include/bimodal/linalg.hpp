#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

namespace bimodal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Every closeness claim in this project is stated in the max-entry norm, so
// residuals are directly comparable to matrix elements.
inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const Matrix& m) {
    return max_abs(Matrix(m - m.adjoint()));
}

inline double unitarity_residual(const Matrix& m) {
    Matrix gram = m.adjoint() * m;
    gram.diagonal().array() -= 1.0;
    return max_abs(gram);
}

inline constexpr double kHermitianTolRel = 1e-12;

// Dense operator on a truncated space, plus a cached hermiticity certificate.
// Algebra is done on .entries directly; the wrapper only carries the
// certificate across API boundaries.
struct OperatorMatrix {
    Matrix entries;
    std::optional<bool> hermitian;

    OperatorMatrix() = default;
    explicit OperatorMatrix(Matrix m) : entries(std::move(m)) {}

    Eigen::Index dimension() const { return entries.rows(); }

    // Certifies using a scale-relative bound: ||A - A'|| <= tol_rel * ||A||.
    // A zero matrix certifies trivially.
    bool certify_hermitian(double tol_rel = kHermitianTolRel) {
        const double scale = max_abs(entries);
        const double res = hermiticity_residual(entries);
        hermitian = (res <= tol_rel * (scale > 0.0 ? scale : 1.0));
        return *hermitian;
    }

    OperatorMatrix adjoint() const {
        OperatorMatrix out(Matrix(entries.adjoint()));
        out.hermitian = hermitian;
        return out;
    }
};

}  // namespace bimodal
