#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mxsketch/types.hpp"

namespace mxsketch {

// Consistent matrix equation A X B = C with an optional SPD weight G on the
// X side and an optional known solution for error tracking. When Xstar is
// supplied the data are checked for consistency up front so that a stalled
// solve points at the algorithm, not the inputs.
template <class Real = double>
struct MatrixEquationT {
    MatX<Real> A;  // p x m
    MatX<Real> B;  // n x q
    MatX<Real> C;  // p x q
    SpdMatT<Real> G;
    std::optional<MatX<Real>> Xstar;  // m x n

    MatrixEquationT(MatX<Real> a, MatX<Real> b, MatX<Real> c,
                    std::optional<MatX<Real>> xstar = std::nullopt,
                    std::optional<SpdMatT<Real>> g = std::nullopt)
        : A(std::move(a)),
          B(std::move(b)),
          C(std::move(c)),
          G(g ? std::move(*g) : SpdMatT<Real>::identity(A.cols())),
          Xstar(std::move(xstar)) {
        if (A.rows() < 1 || A.cols() < 1 || B.rows() < 1 || B.cols() < 1)
            throw std::invalid_argument("MatrixEquation: A and B must be nonempty");
        if (C.rows() != A.rows() || C.cols() != B.cols())
            throw std::invalid_argument("MatrixEquation: C must be rows(A) x cols(B)");
        require_finite(A, "MatrixEquation A");
        require_finite(B, "MatrixEquation B");
        require_finite(C, "MatrixEquation C");
        if (G.rows() != A.cols())
            throw std::invalid_argument("MatrixEquation: G must act on the column space of A");
        if (Xstar) {
            if (Xstar->rows() != A.cols() || Xstar->cols() != B.rows())
                throw std::invalid_argument("MatrixEquation: Xstar must be cols(A) x rows(B)");
            require_finite(*Xstar, "MatrixEquation Xstar");
            const Real resid = (A * (*Xstar) * B - C).norm();
            if (resid > Real(1e-8) * (Real(1) + C.norm()))
                throw std::invalid_argument("MatrixEquation: Xstar does not satisfy A X B = C");
        }
    }

    Index m() const { return A.cols(); }
    Index n() const { return B.rows(); }
    Index p() const { return A.rows(); }
    Index q() const { return B.cols(); }
};

using MatrixEquation = MatrixEquationT<double>;

enum class StopCriterion { RelErrorSq, RelResidual };

// Termination: squared relative error against Xstar, or squared relative
// residual, whichever the caller picks; always capped by max_iters.
template <class Real = double>
struct StopRuleT {
    Index max_iters = 100000;
    Real tol = Real(1e-6);
    StopCriterion criterion = StopCriterion::RelErrorSq;

    void validate() const {
        if (max_iters < 1) throw std::invalid_argument("StopRule: max_iters must be at least 1");
        if (!(tol > Real(0))) throw std::invalid_argument("StopRule: tol must be positive");
    }
};

using StopRule = StopRuleT<double>;

template <class Real = double>
struct SolveReportT {
    MatX<Real> X;
    Index iters = 0;
    bool converged = false;
    std::vector<std::pair<Index, Real>> error_trace;  // (iteration, monitored error)
    double wall_seconds = 0.0;
};

using SolveReport = SolveReportT<double>;

}  // namespace mxsketch
