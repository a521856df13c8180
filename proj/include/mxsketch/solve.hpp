#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mxsketch/equation.hpp"
#include "mxsketch/samplers.hpp"
#include "mxsketch/steps.hpp"

namespace mxsketch {

enum class Method {
    general,
    grk,
    grbk,
    rk_a,
    rk_b,
    cd_pd,
    rcd,
    gauss_grk,
    gauss_rk_a,
    gauss_rk_b,
};

inline const char* to_string(Method m) {
    switch (m) {
        case Method::general: return "general";
        case Method::grk: return "grk";
        case Method::grbk: return "grbk";
        case Method::rk_a: return "rk-a";
        case Method::rk_b: return "rk-b";
        case Method::cd_pd: return "cd-pd";
        case Method::rcd: return "rcd";
        case Method::gauss_grk: return "gauss-grk";
        case Method::gauss_rk_a: return "gauss-rk-a";
        case Method::gauss_rk_b: return "gauss-rk-b";
    }
    return "unknown";
}

inline Method method_from_string(const std::string& s) {
    if (s == "general") return Method::general;
    if (s == "grk") return Method::grk;
    if (s == "grbk") return Method::grbk;
    if (s == "rk-a") return Method::rk_a;
    if (s == "rk-b") return Method::rk_b;
    if (s == "cd-pd") return Method::cd_pd;
    if (s == "rcd") return Method::rcd;
    if (s == "gauss-grk") return Method::gauss_grk;
    if (s == "gauss-rk-a") return Method::gauss_rk_a;
    if (s == "gauss-rk-b") return Method::gauss_rk_b;
    throw std::invalid_argument("unknown method id: " + s);
}

inline const std::vector<Method>& all_methods() {
    static const std::vector<Method> ms = {Method::general,    Method::grk,       Method::grbk,
                                           Method::rk_a,       Method::rk_b,      Method::cd_pd,
                                           Method::rcd,        Method::gauss_grk, Method::gauss_rk_a,
                                           Method::gauss_rk_b};
    return ms;
}

// The sampling family each specialized method is defined with. tau1/tau2
// only matter for grbk. The cd-pd and rcd distributions are not
// norm-weighted coordinate families, so they are spelled out as complete
// discrete pairs.
template <class Real>
SketchSpecT<Real> canonical_spec(Method method, const MatrixEquationT<Real>& eq, Index tau1 = 1,
                                 Index tau2 = 1) {
    switch (method) {
        case Method::general:
        case Method::grk:
            return CoordinatePair{};
        case Method::grbk:
            return BlockPartition{tau1, tau2};
        case Method::rk_a:
            return RowOnly{};
        case Method::rk_b:
            return ColOnly{};
        case Method::cd_pd: {
            if (eq.p() != eq.m())
                throw std::invalid_argument("canonical_spec: cd-pd needs a square A");
            CompleteDiscreteT<Real> cd;
            const Real tr = eq.A.trace();
            if (!(tr > Real(0))) throw std::invalid_argument("canonical_spec: cd-pd needs Tr(A) > 0");
            cd.s_probs.resize(eq.p());
            for (Index i = 0; i < eq.p(); ++i) {
                MatX<Real> e = MatX<Real>::Zero(eq.p(), 1);
                e(i, 0) = Real(1);
                cd.s_members.push_back(std::move(e));
                cd.s_probs(i) = eq.A(i, i) / tr;
            }
            cd.p_members.push_back(MatX<Real>::Identity(eq.q(), eq.q()));
            cd.p_probs = VecX<Real>::Ones(1);
            return cd;
        }
        case Method::rcd: {
            CompleteDiscreteT<Real> cd;
            const Real total = eq.A.squaredNorm();
            cd.s_probs.resize(eq.m());
            for (Index i = 0; i < eq.m(); ++i) {
                cd.s_members.push_back(eq.A.col(i));
                cd.s_probs(i) = eq.A.col(i).squaredNorm() / total;
            }
            cd.p_members.push_back(MatX<Real>::Identity(eq.q(), eq.q()));
            cd.p_probs = VecX<Real>::Ones(1);
            return cd;
        }
        case Method::gauss_grk:
        case Method::gauss_rk_a:
        case Method::gauss_rk_b:
            return GaussianPairT<Real>{};
    }
    throw std::logic_error("canonical_spec: unhandled method");
}

template <class Real = double>
struct SolveOptionsT {
    Index trace_stride = 1;                       // error evaluated at these iterations
    std::optional<double> time_budget_seconds;    // soft cap, checked at trace points
    std::optional<MatX<Real>> X0;                 // defaults to the zero matrix
};

using SolveOptions = SolveOptionsT<double>;

namespace detail {

template <class Real>
bool spec_matches_method(Method method, const SketchSpecT<Real>& spec) {
    switch (method) {
        case Method::general:
            return true;
        case Method::grk:
            return std::holds_alternative<CoordinatePair>(spec);
        case Method::grbk:
            return std::holds_alternative<BlockPartition>(spec) ||
                   std::holds_alternative<IdentityPair>(spec);
        case Method::rk_a:
            return std::holds_alternative<RowOnly>(spec);
        case Method::rk_b:
            return std::holds_alternative<ColOnly>(spec);
        case Method::cd_pd:
        case Method::rcd:
            return std::holds_alternative<CompleteDiscreteT<Real>>(spec);
        case Method::gauss_grk:
        case Method::gauss_rk_a:
        case Method::gauss_rk_b:
            return std::holds_alternative<GaussianPairT<Real>>(spec);
    }
    return false;
}

// Covariance Cholesky factor, or empty for the identity.
template <class Real>
MatX<Real> chol_or_empty(const MatX<Real>& sigma, Index dim, const char* side) {
    if (sigma.size() == 0) return MatX<Real>();
    if (sigma.rows() != dim || sigma.cols() != dim)
        throw std::invalid_argument(std::string("solve: covariance dimension mismatch on ") + side);
    SpdMatT<Real> spd(sigma);
    Eigen::LLT<MatX<Real>> llt(spd.matrix());
    return MatX<Real>(llt.matrixL());
}

template <class Real>
VecX<Real> gauss_draw(const MatX<Real>& chol, Index dim, Rng& rng) {
    VecX<Real> z(dim);
    for (Index i = 0; i < dim; ++i) z(i) = Real(rng.normal());
    return chol.size() == 0 ? z : VecX<Real>(chol * z);
}

// Redraw until the sketched direction has usable mass; sixteen dead draws
// in a row means the problem data are degenerate.
template <class Real, class DrawFn, class NormFn>
VecX<Real> guarded_gauss_draw(DrawFn&& draw_fn, NormFn&& norm_fn, Real floor_sq) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        VecX<Real> z = draw_fn();
        if (norm_fn(z) > floor_sq) return z;
    }
    throw std::runtime_error("solve: gaussian sketch kept vanishing against the data");
}

}  // namespace detail

// Run the randomized iteration picked by `method` until the stop rule fires.
// The spec chooses the sampling family; it must agree with the method's
// canonical family (anything goes for `general`). Specialized methods always
// sample from their defining distributions; the spec only carries parameters
// such as block sizes or covariances.
template <class Real>
SolveReportT<Real> solve(const MatrixEquationT<Real>& eq, Method method,
                         const SketchSpecT<Real>& spec, const StopRuleT<Real>& stop, Rng& rng,
                         const SolveOptionsT<Real>& opts = {}) {
    stop.validate();
    if (!detail::spec_matches_method(method, spec))
        throw std::invalid_argument(std::string("solve: sketch spec incompatible with method ") +
                                    to_string(method));
    if (opts.trace_stride < 1) throw std::invalid_argument("solve: trace_stride must be positive");

    const Index m = eq.m(), n = eq.n();
    SolveReportT<Real> rep;
    rep.X = opts.X0 ? *opts.X0 : MatX<Real>::Zero(m, n);
    if (rep.X.rows() != m || rep.X.cols() != n)
        throw std::invalid_argument("solve: X0 shape mismatch");
    require_finite(rep.X, "solve X0");

    Real err_denom = Real(1);
    if (stop.criterion == StopCriterion::RelErrorSq) {
        if (!eq.Xstar)
            throw std::invalid_argument("solve: RelErrorSq stop rule needs eq.Xstar");
        err_denom = eq.Xstar->squaredNorm();
        if (!(err_denom > Real(0)))
            throw std::invalid_argument("solve: RelErrorSq needs a nonzero Xstar");
    } else {
        err_denom = eq.C.squaredNorm();
        if (err_denom <= Real(0)) err_denom = Real(1);  // fall back to absolute residual
    }
    auto eval_err = [&](const MatX<Real>& x) -> Real {
        if (stop.criterion == StopCriterion::RelErrorSq)
            return (x - *eq.Xstar).squaredNorm() / err_denom;
        return (eq.A * x * eq.B - eq.C).squaredNorm() / err_denom;
    };

    const Real guard = Real(1e12) * (Real(1) + rep.X.norm() + eq.C.norm());

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    // Method-specific state, built once per solve.
    VecX<Real> row_probs, col_probs, cd_probs;
    std::vector<std::vector<Index>> row_blocks, col_blocks;
    MatX<Real> b_pinv, a_pinv, ata, atc;
    MatX<Real> chol1, chol2;
    Real gauss_floor_a = Real(0), gauss_floor_b = Real(0);

    switch (method) {
        case Method::general:
            break;
        case Method::grk:
            row_probs = row_probabilities(eq.A);
            col_probs = col_probabilities(eq.B);
            break;
        case Method::grbk: {
            if (const auto* bp = std::get_if<BlockPartition>(&spec)) {
                row_blocks = block_partition(eq.p(), bp->tau1);
                col_blocks = block_partition(eq.q(), bp->tau2);
            } else {
                row_blocks = block_partition(eq.p(), eq.p());
                col_blocks = block_partition(eq.q(), eq.q());
            }
            break;
        }
        case Method::rk_a:
            row_probs = row_probabilities(eq.A);
            b_pinv = pseudoinverse(eq.B);
            break;
        case Method::rk_b:
            col_probs = col_probabilities(eq.B);
            a_pinv = pseudoinverse(eq.A);
            break;
        case Method::cd_pd: {
            if (eq.p() != eq.m()) throw std::invalid_argument("solve: cd-pd needs a square A");
            const SpdMatT<Real> check(eq.A);  // validates symmetry and positive definiteness
            (void)check;
            cd_probs = eq.A.diagonal() / eq.A.trace();
            b_pinv = pseudoinverse(eq.B);
            break;
        }
        case Method::rcd: {
            if (numerical_rank(eq.A) != eq.m())
                throw std::invalid_argument("solve: rcd needs a full column rank A");
            cd_probs = eq.A.colwise().squaredNorm().transpose() / eq.A.squaredNorm();
            b_pinv = pseudoinverse(eq.B);
            ata = eq.A.transpose() * eq.A;
            atc = eq.A.transpose() * eq.C;
            break;
        }
        case Method::gauss_grk:
        case Method::gauss_rk_a:
        case Method::gauss_rk_b: {
            const auto& gp = std::get<GaussianPairT<Real>>(spec);
            if (method != Method::gauss_rk_b)
                chol1 = detail::chol_or_empty(gp.sigma1, eq.p(), "sigma1");
            if (method != Method::gauss_rk_a)
                chol2 = detail::chol_or_empty(gp.sigma2, eq.q(), "sigma2");
            const Real fa = Real(1e-14) * eq.A.norm();
            const Real fb = Real(1e-14) * eq.B.norm();
            gauss_floor_a = fa * fa;
            gauss_floor_b = fb * fb;
            if (method != Method::gauss_grk) {
                if (method == Method::gauss_rk_a) b_pinv = pseudoinverse(eq.B);
                else a_pinv = pseudoinverse(eq.A);
            }
            break;
        }
    }

    Real err = eval_err(rep.X);
    rep.error_trace.emplace_back(0, err);
    if (err < stop.tol) {
        rep.converged = true;
        rep.iters = 0;
        rep.wall_seconds = elapsed();
        return rep;
    }

    auto draw_zeta = [&]() {
        return detail::guarded_gauss_draw<Real>(
            [&] { return detail::gauss_draw(chol1, eq.p(), rng); },
            [&](const VecX<Real>& z) {
                const Real zn = z.squaredNorm();
                return zn == Real(0) ? Real(-1)
                                     : (eq.A.transpose() * z).squaredNorm() / zn;
            },
            gauss_floor_a);
    };
    auto draw_eta = [&]() {
        return detail::guarded_gauss_draw<Real>(
            [&] { return detail::gauss_draw(chol2, eq.q(), rng); },
            [&](const VecX<Real>& z) {
                const Real zn = z.squaredNorm();
                return zn == Real(0) ? Real(-1) : (eq.B * z).squaredNorm() / zn;
            },
            gauss_floor_b);
    };

    Index k = 0;
    while (k < stop.max_iters) {
        ++k;
        switch (method) {
            case Method::general: {
                SketchDrawT<Real> d = draw(spec, eq.A, eq.B, rng);
                rep.X = general_step(std::move(rep.X), eq, d.S, d.P);
                break;
            }
            case Method::grk: {
                const Index i = sample_categorical(row_probs, rng);
                const Index j = sample_categorical(col_probs, rng);
                rep.X = grk_step(std::move(rep.X), eq, i, j);
                break;
            }
            case Method::grbk: {
                const auto& rowsI = row_blocks[rng.below(row_blocks.size())];
                const auto& colsJ = col_blocks[rng.below(col_blocks.size())];
                rep.X = grbk_step(std::move(rep.X), eq, rowsI, colsJ);
                break;
            }
            case Method::rk_a: {
                const Index i = sample_categorical(row_probs, rng);
                rep.X = rka_step(std::move(rep.X), eq, i, b_pinv);
                break;
            }
            case Method::rk_b: {
                const Index j = sample_categorical(col_probs, rng);
                rep.X = rkb_step(std::move(rep.X), eq, j, a_pinv);
                break;
            }
            case Method::cd_pd: {
                const Index i = sample_categorical(cd_probs, rng);
                rep.X = cdpd_step(std::move(rep.X), eq, i, b_pinv);
                break;
            }
            case Method::rcd: {
                const Index i = sample_categorical(cd_probs, rng);
                // Cached A'A row and A'C row keep the residual cost linear.
                const MatX<Real> t = ata.row(i) * rep.X;                 // 1 x n
                const MatX<Real> r = t * eq.B - atc.row(i);              // 1 x q
                rep.X.row(i).noalias() -= (r * b_pinv) / ata(i, i);
                break;
            }
            case Method::gauss_grk: {
                const VecX<Real> zeta = draw_zeta();
                const VecX<Real> eta = draw_eta();
                rep.X = gauss_step(std::move(rep.X), eq, zeta, eta);
                break;
            }
            case Method::gauss_rk_a: {
                const VecX<Real> zeta = draw_zeta();
                rep.X = gaussrka_step(std::move(rep.X), eq, zeta, b_pinv);
                break;
            }
            case Method::gauss_rk_b: {
                const VecX<Real> eta = draw_eta();
                rep.X = gaussrkb_step(std::move(rep.X), eq, eta, a_pinv);
                break;
            }
        }

        if (k % opts.trace_stride == 0 || k == stop.max_iters) {
            err = eval_err(rep.X);
            rep.error_trace.emplace_back(k, err);
            if (err < stop.tol) {
                rep.converged = true;
                break;
            }
            if (!std::isfinite(double(err)) || rep.X.norm() > guard)
                throw std::runtime_error("solve: iteration diverged");
            if (opts.time_budget_seconds && elapsed() > *opts.time_budget_seconds) break;
        }
    }
    rep.iters = k;
    rep.wall_seconds = elapsed();
    return rep;
}

// Convenience overload: run with the method's canonical sampling family.
template <class Real>
SolveReportT<Real> solve(const MatrixEquationT<Real>& eq, Method method,
                         const StopRuleT<Real>& stop, Rng& rng,
                         const SolveOptionsT<Real>& opts = {}, Index tau1 = 1, Index tau2 = 1) {
    return solve(eq, method, canonical_spec(method, eq, tau1, tau2), stop, rng, opts);
}

}  // namespace mxsketch
