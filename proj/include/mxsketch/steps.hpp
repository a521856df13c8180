#pragma once

#include <stdexcept>
#include <vector>

#include "mxsketch/equation.hpp"
#include "mxsketch/linalg.hpp"
#include "mxsketch/types.hpp"

namespace mxsketch {

// One sketch-and-project update for arbitrary sketching matrices S (p x tau1)
// and P (q x tau2). The two small Gram systems are solved through the SVD
// pseudoinverse, so rank-deficient sketches are handled without special
// casing. X is taken by value; pass std::move to update in place.
template <class Real>
MatX<Real> general_step(MatX<Real> x, const MatrixEquationT<Real>& eq, const MatX<Real>& s,
                        const MatX<Real>& p) {
    if (s.rows() != eq.p() || s.cols() < 1)
        throw std::invalid_argument("general_step: S must have rows(A) rows");
    if (p.rows() != eq.q() || p.cols() < 1)
        throw std::invalid_argument("general_step: P must have cols(B) rows");
    if (x.rows() != eq.m() || x.cols() != eq.n())
        throw std::invalid_argument("general_step: X shape mismatch");

    const MatX<Real> sa = s.transpose() * eq.A;        // tau1 x m
    const MatX<Real> w = eq.G.solve(sa.transpose());   // m x tau1, G^{-1} A' S
    const MatX<Real> m1 = sa * w;                      // S' A G^{-1} A' S
    const MatX<Real> bp = eq.B * p;                    // n x tau2
    const MatX<Real> m2 = bp.transpose() * bp;
    const MatX<Real> rs = s.transpose() * (eq.A * x * eq.B - eq.C) * p;
    x.noalias() -= w * (pseudoinverse(m1) * rs * pseudoinverse(m2)) * bp.transpose();
    return x;
}

// Rank-one update on the sampled (row of A, column of B) pair.
template <class Real>
MatX<Real> grk_step(MatX<Real> x, const MatrixEquationT<Real>& eq, Index i, Index j) {
    if (i < 0 || i >= eq.p() || j < 0 || j >= eq.q())
        throw std::invalid_argument("grk_step: index out of range");
    const Real ra = eq.A.row(i).squaredNorm();
    const Real rb = eq.B.col(j).squaredNorm();
    if (ra <= Real(0) || rb <= Real(0))
        throw std::invalid_argument("grk_step: zero row or column selected");
    const Real r = eq.A.row(i) * x * eq.B.col(j) - eq.C(i, j);
    x.noalias() -= (r / (ra * rb)) * (eq.A.row(i).transpose() * eq.B.col(j).transpose());
    return x;
}

// Block update: project onto the sub-equation picked out by the row set I of
// A and the column set J of B. Pseudoinverses of the two blocks are formed
// per call since the blocks change every draw.
template <class Real>
MatX<Real> grbk_step(MatX<Real> x, const MatrixEquationT<Real>& eq, const std::vector<Index>& rows,
                     const std::vector<Index>& cols) {
    if (rows.empty() || cols.empty())
        throw std::invalid_argument("grbk_step: empty index block");
    MatX<Real> ai(static_cast<Index>(rows.size()), eq.m());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] < 0 || rows[k] >= eq.p()) throw std::invalid_argument("grbk_step: row out of range");
        ai.row(static_cast<Index>(k)) = eq.A.row(rows[k]);
    }
    MatX<Real> bj(eq.n(), static_cast<Index>(cols.size()));
    MatX<Real> cij(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t l = 0; l < cols.size(); ++l) {
        if (cols[l] < 0 || cols[l] >= eq.q()) throw std::invalid_argument("grbk_step: column out of range");
        bj.col(static_cast<Index>(l)) = eq.B.col(cols[l]);
        for (std::size_t k = 0; k < rows.size(); ++k)
            cij(static_cast<Index>(k), static_cast<Index>(l)) = eq.C(rows[k], cols[l]);
    }
    x.noalias() += pseudoinverse(ai) * (cij - ai * x * bj) * pseudoinverse(bj);
    return x;
}

// Row action with the full B on the right; b_pinv must be pseudoinverse(B).
template <class Real>
MatX<Real> rka_step(MatX<Real> x, const MatrixEquationT<Real>& eq, Index i,
                    const MatX<Real>& b_pinv) {
    if (i < 0 || i >= eq.p()) throw std::invalid_argument("rka_step: index out of range");
    if (b_pinv.rows() != eq.q() || b_pinv.cols() != eq.n())
        throw std::invalid_argument("rka_step: b_pinv must be cols(B) x rows(B)");
    const Real ra = eq.A.row(i).squaredNorm();
    if (ra <= Real(0)) throw std::invalid_argument("rka_step: zero row selected");
    const MatX<Real> resid = eq.C.row(i) - eq.A.row(i) * x * eq.B;  // 1 x q
    x.noalias() += eq.A.row(i).transpose() * (resid * b_pinv) / ra;
    return x;
}

// Column action mirror; a_pinv must be pseudoinverse(A).
template <class Real>
MatX<Real> rkb_step(MatX<Real> x, const MatrixEquationT<Real>& eq, Index j,
                    const MatX<Real>& a_pinv) {
    if (j < 0 || j >= eq.q()) throw std::invalid_argument("rkb_step: index out of range");
    if (a_pinv.rows() != eq.m() || a_pinv.cols() != eq.p())
        throw std::invalid_argument("rkb_step: a_pinv must be cols(A) x rows(A)");
    const Real rb = eq.B.col(j).squaredNorm();
    if (rb <= Real(0)) throw std::invalid_argument("rkb_step: zero column selected");
    const MatX<Real> resid = eq.C.col(j) - eq.A * x * eq.B.col(j);  // p x 1
    x.noalias() += (a_pinv * resid) * eq.B.col(j).transpose() / rb;
    return x;
}

// Coordinate descent for symmetric positive definite A. Only row i of X
// moves. bt_pinv is (B'B)^+ B' (equal to pseudoinverse(B)).
template <class Real>
MatX<Real> cdpd_step(MatX<Real> x, const MatrixEquationT<Real>& eq, Index i,
                     const MatX<Real>& bt_pinv) {
    if (eq.p() != eq.m()) throw std::invalid_argument("cdpd_step: A must be square");
    if (i < 0 || i >= eq.p()) throw std::invalid_argument("cdpd_step: index out of range");
    if (bt_pinv.rows() != eq.q() || bt_pinv.cols() != eq.n())
        throw std::invalid_argument("cdpd_step: bt_pinv must be cols(B) x rows(B)");
    const Real aii = eq.A(i, i);
    if (!(aii > Real(0))) throw std::invalid_argument("cdpd_step: nonpositive diagonal entry");
    const MatX<Real> r = eq.A.row(i) * x * eq.B - eq.C.row(i);  // 1 x q
    x.row(i).noalias() -= (r * bt_pinv) / aii;
    return x;
}

// Column-norm weighted coordinate descent (sketch S = A e_i, weight G = A'A).
// Also a single-row update. bt_pinv as in cdpd_step.
template <class Real>
MatX<Real> rcd_step(MatX<Real> x, const MatrixEquationT<Real>& eq, Index i,
                    const MatX<Real>& bt_pinv) {
    if (i < 0 || i >= eq.m()) throw std::invalid_argument("rcd_step: index out of range");
    if (bt_pinv.rows() != eq.q() || bt_pinv.cols() != eq.n())
        throw std::invalid_argument("rcd_step: bt_pinv must be cols(B) x rows(B)");
    const Real cn = eq.A.col(i).squaredNorm();
    if (cn <= Real(0)) throw std::invalid_argument("rcd_step: zero column selected");
    // (A_{:,i})' (A X B - C) expanded left to right keeps the cost linear in
    // the matrix sizes instead of forming the full residual.
    const MatX<Real> t = (eq.A.col(i).transpose() * eq.A) * x;       // 1 x n
    const MatX<Real> r = t * eq.B - eq.A.col(i).transpose() * eq.C;  // 1 x q
    x.row(i).noalias() -= (r * bt_pinv) / cn;
    return x;
}

// Gaussian sketch on both sides, rank-one in the transformed coordinates.
template <class Real>
MatX<Real> gauss_step(MatX<Real> x, const MatrixEquationT<Real>& eq, const VecX<Real>& zeta,
                      const VecX<Real>& eta) {
    if (zeta.size() != eq.p() || eta.size() != eq.q())
        throw std::invalid_argument("gauss_step: sketch vector size mismatch");
    const VecX<Real> u = eq.A.transpose() * zeta;  // m
    const VecX<Real> v = eq.B * eta;               // n
    const Real du = u.squaredNorm(), dv = v.squaredNorm();
    if (du <= Real(0) || dv <= Real(0))
        throw std::invalid_argument("gauss_step: sketch fell in the null space");
    const Real r = zeta.dot(eq.C * eta) - u.dot(x * v);
    x.noalias() += (r / (du * dv)) * (u * v.transpose());
    return x;
}

// Gaussian row mixing with P = I; b_pinv must be pseudoinverse(B).
template <class Real>
MatX<Real> gaussrka_step(MatX<Real> x, const MatrixEquationT<Real>& eq, const VecX<Real>& zeta,
                         const MatX<Real>& b_pinv) {
    if (zeta.size() != eq.p())
        throw std::invalid_argument("gaussrka_step: sketch vector size mismatch");
    if (b_pinv.rows() != eq.q() || b_pinv.cols() != eq.n())
        throw std::invalid_argument("gaussrka_step: b_pinv must be cols(B) x rows(B)");
    const VecX<Real> u = eq.A.transpose() * zeta;  // m
    const Real du = u.squaredNorm();
    if (du <= Real(0)) throw std::invalid_argument("gaussrka_step: sketch fell in the null space");
    const MatX<Real> resid = zeta.transpose() * eq.C - (u.transpose() * x) * eq.B;  // 1 x q
    x.noalias() += u * (resid * b_pinv) / du;
    return x;
}

// Gaussian column mixing with S = I; a_pinv must be pseudoinverse(A).
template <class Real>
MatX<Real> gaussrkb_step(MatX<Real> x, const MatrixEquationT<Real>& eq, const VecX<Real>& eta,
                         const MatX<Real>& a_pinv) {
    if (eta.size() != eq.q())
        throw std::invalid_argument("gaussrkb_step: sketch vector size mismatch");
    if (a_pinv.rows() != eq.m() || a_pinv.cols() != eq.p())
        throw std::invalid_argument("gaussrkb_step: a_pinv must be cols(A) x rows(A)");
    const VecX<Real> v = eq.B * eta;  // n
    const Real dv = v.squaredNorm();
    if (dv <= Real(0)) throw std::invalid_argument("gaussrkb_step: sketch fell in the null space");
    const VecX<Real> resid = eq.C * eta - eq.A * (x * v);  // p x 1
    x.noalias() += (a_pinv * resid) * v.transpose() / dv;
    return x;
}

}  // namespace mxsketch
