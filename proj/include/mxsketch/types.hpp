#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mxsketch {

using Index = Eigen::Index;

template <class Real>
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matrix = MatX<double>;
using Vector = VecX<double>;

template <class Real>
bool all_finite(const MatX<Real>& m) {
    return m.allFinite();
}

template <class Real>
void require_finite(const MatX<Real>& m, const std::string& what) {
    if (!m.allFinite())
        throw std::invalid_argument(what + ": entries must be finite");
}

template <class Real>
Real max_abs(const MatX<Real>& m) {
    return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

// Symmetric positive definite matrix, validated once at construction and
// reused for G-weighted geometry: factor solves, square roots, extremes.
// identity(n) skips validation and lets downstream code take cheap paths.
template <class Real = double>
class SpdMatT {
public:
    static SpdMatT identity(Index n) {
        if (n < 1) throw std::invalid_argument("SpdMat: dimension must be positive");
        SpdMatT g;
        g.mat_ = MatX<Real>::Identity(n, n);
        g.identity_ = true;
        g.lambda_min_ = Real(1);
        g.lambda_max_ = Real(1);
        return g;
    }

    explicit SpdMatT(MatX<Real> g) : mat_(std::move(g)) {
        if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
            throw std::invalid_argument("SpdMat: matrix must be square and nonempty");
        require_finite(mat_, "SpdMat");
        const Real scale = max_abs(mat_);
        if ((mat_ - mat_.transpose()).cwiseAbs().maxCoeff() > Real(1e-12) * std::max(scale, Real(1)))
            throw std::invalid_argument("SpdMat: matrix is not symmetric");
        mat_ = ((mat_ + mat_.transpose()) / Real(2)).eval();
        Eigen::SelfAdjointEigenSolver<MatX<Real>> es(mat_);
        lambda_min_ = es.eigenvalues().minCoeff();
        lambda_max_ = es.eigenvalues().maxCoeff();
        if (!(lambda_min_ > Real(0)))
            throw std::invalid_argument("SpdMat: smallest eigenvalue is not positive");
        eivecs_ = es.eigenvectors();
        eivals_ = es.eigenvalues();
        identity_ = (mat_ - MatX<Real>::Identity(mat_.rows(), mat_.cols())).cwiseAbs().maxCoeff() == Real(0);
    }

    Index rows() const { return mat_.rows(); }
    const MatX<Real>& matrix() const { return mat_; }
    bool is_identity() const { return identity_; }
    Real lambda_min() const { return lambda_min_; }
    Real lambda_max() const { return lambda_max_; }

    // G^{-1} rhs
    MatX<Real> solve(const MatX<Real>& rhs) const {
        if (rhs.rows() != mat_.rows())
            throw std::invalid_argument("SpdMat::solve: dimension mismatch");
        if (identity_) return rhs;
        return eivecs_ * eivals_.cwiseInverse().asDiagonal() * (eivecs_.transpose() * rhs);
    }

    MatX<Real> sqrt() const {
        if (identity_) return mat_;
        return eivecs_ * eivals_.cwiseSqrt().asDiagonal() * eivecs_.transpose();
    }

    MatX<Real> inv_sqrt() const {
        if (identity_) return mat_;
        return eivecs_ * eivals_.cwiseSqrt().cwiseInverse().asDiagonal() * eivecs_.transpose();
    }

    // x' G x for a single column
    Real quad(const VecX<Real>& x) const {
        if (identity_) return x.squaredNorm();
        return x.dot(mat_ * x);
    }

private:
    SpdMatT() = default;

    MatX<Real> mat_;
    MatX<Real> eivecs_;
    VecX<Real> eivals_;
    Real lambda_min_ = Real(1);
    Real lambda_max_ = Real(1);
    bool identity_ = false;
};

using SpdMat = SpdMatT<double>;

}  // namespace mxsketch
