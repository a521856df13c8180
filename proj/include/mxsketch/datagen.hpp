#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mxsketch/equation.hpp"
#include "mxsketch/linalg.hpp"
#include "mxsketch/rng.hpp"
#include "mxsketch/types.hpp"

namespace mxsketch {

template <class Real = double>
struct ProblemPairT {
    MatX<Real> A;
    MatX<Real> B;
};

using ProblemPair = ProblemPairT<double>;

// Controlled-spectrum pair: A = U1 D1 V1' (p x m, rank r1) and
// B = U2 D2 V2' (n x q, rank r2) with orthonormal factors and singular
// values drawn uniformly from (1, 2). RNG consumption order is fixed
// (U1, V1, D1, U2, V2, D2) so a seed pins the instance.
template <class Real = double>
ProblemPairT<Real> gen_type1(Index p, Index m, Index r1, Index n, Index q, Index r2, Rng& rng) {
    if (r1 < 1 || r1 > std::min(p, m))
        throw std::invalid_argument("gen_type1: need 1 <= r1 <= min(p, m)");
    if (r2 < 1 || r2 > std::min(n, q))
        throw std::invalid_argument("gen_type1: need 1 <= r2 <= min(n, q)");
    ProblemPairT<Real> pr;
    {
        const MatX<Real> u = orthonormal_columns<Real>(p, r1, rng);
        const MatX<Real> v = orthonormal_columns<Real>(m, r1, rng);
        VecX<Real> d(r1);
        for (Index i = 0; i < r1; ++i) d(i) = Real(1) + Real(rng.uniform());
        pr.A = u * d.asDiagonal() * v.transpose();
    }
    {
        const MatX<Real> u = orthonormal_columns<Real>(n, r2, rng);
        const MatX<Real> v = orthonormal_columns<Real>(q, r2, rng);
        VecX<Real> d(r2);
        for (Index i = 0; i < r2; ++i) d(i) = Real(1) + Real(rng.uniform());
        pr.B = u * d.asDiagonal() * v.transpose();
    }
    return pr;
}

// Unstructured pair with independent standard normal entries.
template <class Real = double>
ProblemPairT<Real> gen_type2(Index p, Index m, Index n, Index q, Rng& rng) {
    if (p < 1 || m < 1 || n < 1 || q < 1)
        throw std::invalid_argument("gen_type2: dimensions must be positive");
    ProblemPairT<Real> pr;
    pr.A.resize(p, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < p; ++i) pr.A(i, j) = Real(rng.normal());
    pr.B.resize(n, q);
    for (Index j = 0; j < q; ++j)
        for (Index i = 0; i < n; ++i) pr.B(i, j) = Real(rng.normal());
    return pr;
}

// Consistent equation with the given (or all-ones) solution: C = A Xstar B.
template <class Real>
MatrixEquationT<Real> assemble(const MatX<Real>& a, const MatX<Real>& b,
                               std::optional<MatX<Real>> xstar = std::nullopt) {
    MatX<Real> xs = xstar ? std::move(*xstar) : MatX<Real>::Ones(a.cols(), b.rows());
    if (xs.rows() != a.cols() || xs.cols() != b.rows())
        throw std::invalid_argument("assemble: Xstar must be cols(A) x rows(B)");
    MatX<Real> c = a * xs * b;
    return MatrixEquationT<Real>(a, b, std::move(c), std::move(xs));
}

// Deterministic piecewise-constant test image on [0,1]^2: two axis-aligned
// rectangles and a centered disk on a zero background, all values in [0,1].
// Landmarks are placed so the shapes stay disjoint at every resolution.
template <class Real = double>
MatX<Real> phantom(Index n) {
    if (n < 4) throw std::invalid_argument("phantom: need N >= 4");
    MatX<Real> img = MatX<Real>::Zero(n, n);
    auto center = [n](Index k) { return (double(k) + 0.5) / double(n); };
    for (Index i = 0; i < n; ++i) {
        const double y = center(i);
        for (Index j = 0; j < n; ++j) {
            const double x = center(j);
            if (y >= 0.08 && y < 0.28 && x >= 0.10 && x < 0.45) img(i, j) = Real(0.55);
            if (y >= 0.72 && y < 0.92 && x >= 0.55 && x < 0.90) img(i, j) = Real(0.85);
            const double dy = y - 0.5, dx = x - 0.5;
            if (dy * dy + dx * dx <= 0.18 * 0.18) img(i, j) = Real(1.0);
        }
    }
    return img;
}

}  // namespace mxsketch
