#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mxsketch/rng.hpp"
#include "mxsketch/types.hpp"

namespace mxsketch {

// Hard cap on Kronecker products and anything built on top of them
// (vectorized projectors, brute-force oracles). Keeps accidental
// benchmark-scale calls from allocating gigabytes.
inline constexpr Index kron_dim_cap = 4096;

// Tr(X' G X), the squared Frobenius norm in the G-weighted inner product.
template <class Real>
Real weighted_frob_sq(const MatX<Real>& x, const SpdMatT<Real>& g) {
    if (x.rows() != g.rows())
        throw std::invalid_argument("weighted_frob_sq: row count must match G");
    if (g.is_identity()) return x.squaredNorm();
    return (x.transpose() * g.matrix() * x).trace();
}

template <class Real>
Real weighted_frob_sq(const MatX<Real>& x) {
    return x.squaredNorm();
}

// Moore-Penrose pseudoinverse via SVD. Singular values at or below
// tol * sigma_max are treated as zero; tol < 0 selects the usual
// max(rows, cols) * eps default.
template <class Real>
MatX<Real> pseudoinverse(const MatX<Real>& m, Real tol = Real(-1)) {
    if (m.rows() < 1 || m.cols() < 1)
        throw std::invalid_argument("pseudoinverse: matrix must be nonempty");
    require_finite(m, "pseudoinverse");
    Eigen::JacobiSVD<MatX<Real>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sig = svd.singularValues();
    const Real smax = sig.size() > 0 ? sig(0) : Real(0);
    if (smax == Real(0)) return MatX<Real>::Zero(m.cols(), m.rows());
    if (tol < Real(0))
        tol = Real(std::max(m.rows(), m.cols())) * std::numeric_limits<Real>::epsilon();
    VecX<Real> inv = VecX<Real>::Zero(sig.size());
    for (Index i = 0; i < sig.size(); ++i)
        if (sig(i) > tol * smax) inv(i) = Real(1) / sig(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

// Numerical rank with the same thresholding convention as pseudoinverse.
template <class Real>
Index numerical_rank(const MatX<Real>& m, Real tol = Real(-1)) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<MatX<Real>> svd(m);
    const auto& sig = svd.singularValues();
    const Real smax = sig.size() > 0 ? sig(0) : Real(0);
    if (smax == Real(0)) return 0;
    if (tol < Real(0))
        tol = Real(std::max(m.rows(), m.cols())) * std::numeric_limits<Real>::epsilon();
    Index r = 0;
    for (Index i = 0; i < sig.size(); ++i)
        if (sig(i) > tol * smax) ++r;
    return r;
}

template <class Real>
MatX<Real> kron(const MatX<Real>& a, const MatX<Real>& b) {
    const Index rr = a.rows() * b.rows();
    const Index rc = a.cols() * b.cols();
    if (rr > kron_dim_cap || rc > kron_dim_cap)
        throw std::invalid_argument("kron: result dimension exceeds cap");
    MatX<Real> out(rr, rc);
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Column-stacking vectorization, so vec(AXB) = (B' (x) A) vec(X).
template <class Real>
VecX<Real> vec(const MatX<Real>& x) {
    VecX<Real> v(x.size());
    Index k = 0;
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i) v(k++) = x(i, j);
    return v;
}

template <class Real>
MatX<Real> unvec(const VecX<Real>& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw std::invalid_argument("unvec: size mismatch");
    MatX<Real> x(rows, cols);
    Index k = 0;
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) x(i, j) = v(k++);
    return x;
}

// Extreme eigenvalues of a symmetric matrix. Rejects inputs whose
// asymmetry exceeds a 1e-10 relative tolerance rather than silently
// symmetrizing a wrong operand.
template <class Real>
std::pair<Real, Real> sym_eig_extremes(const MatX<Real>& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("sym_eig_extremes: matrix must be square");
    const Real scale = std::max(max_abs(m), Real(1));
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > Real(1e-10) * scale)
        throw std::invalid_argument("sym_eig_extremes: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<MatX<Real>> es((m + m.transpose()) / Real(2));
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

// Smallest nonzero singular value (the sigma_min convention used by the
// sigma-based rate). Zero matrix has none, which is an error.
template <class Real>
Real min_singular(const MatX<Real>& m) {
    if (m.rows() < 1 || m.cols() < 1)
        throw std::invalid_argument("min_singular: matrix must be nonempty");
    Eigen::JacobiSVD<MatX<Real>> svd(m);
    const auto& sig = svd.singularValues();
    const Real smax = sig.size() > 0 ? sig(0) : Real(0);
    if (smax == Real(0))
        throw std::invalid_argument("min_singular: zero matrix has no nonzero singular value");
    const Real tol = Real(std::max(m.rows(), m.cols())) * std::numeric_limits<Real>::epsilon();
    Real smin = smax;
    for (Index i = 0; i < sig.size(); ++i)
        if (sig(i) > tol * smax) smin = sig(i);
    return smin;
}

// Thin Q factor of a Gaussian matrix: a uniformly random orthonormal frame.
template <class Real = double>
MatX<Real> orthonormal_columns(Index rows, Index cols, Rng& rng) {
    if (rows < 1 || cols < 1 || cols > rows)
        throw std::invalid_argument("orthonormal_columns: need 1 <= cols <= rows");
    MatX<Real> g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) g(i, j) = Real(rng.normal());
    Eigen::HouseholderQR<MatX<Real>> qr(g);
    MatX<Real> q = qr.householderQ() * MatX<Real>::Identity(rows, cols);
    return q;
}

}  // namespace mxsketch
