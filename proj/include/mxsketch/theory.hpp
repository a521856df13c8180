#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mxsketch/equation.hpp"
#include "mxsketch/linalg.hpp"
#include "mxsketch/samplers.hpp"

namespace mxsketch {

// Oblique projector G^{-1} A' S (S' A G^{-1} A' S)^+ S' A. Idempotent and
// self-adjoint in the G inner product; orthogonal for G = I.
template <class Real>
MatX<Real> projector_Z1p(const MatX<Real>& a, const SpdMatT<Real>& g, const MatX<Real>& s) {
    if (s.rows() != a.rows() || s.cols() < 1)
        throw std::invalid_argument("projector_Z1p: S must have rows(A) rows");
    if (g.rows() != a.cols())
        throw std::invalid_argument("projector_Z1p: G must act on the column space of A");
    const MatX<Real> sa = s.transpose() * a;       // tau x m
    const MatX<Real> w = g.solve(sa.transpose());  // m x tau
    return w * pseudoinverse(MatX<Real>(sa * w)) * sa;
}

// Orthogonal projector onto the column space of B P.
template <class Real>
MatX<Real> projector_Z2(const MatX<Real>& b, const MatX<Real>& p) {
    if (p.rows() != b.cols() || p.cols() < 1)
        throw std::invalid_argument("projector_Z2: P must have cols(B) rows");
    const MatX<Real> bp = b * p;  // n x tau
    return bp * pseudoinverse(MatX<Real>(bp.transpose() * bp)) * bp.transpose();
}

namespace detail {

template <class Real>
struct WeightedSketch {
    MatX<Real> member;
    Real prob;
};

// Explicit member lists for the discrete families. Zero-probability members
// are dropped; they contribute nothing to any expectation.
template <class Real>
std::pair<std::vector<WeightedSketch<Real>>, std::vector<WeightedSketch<Real>>>
enumerate_support(const SketchSpecT<Real>& spec, const MatX<Real>& a, const MatX<Real>& b) {
    std::vector<WeightedSketch<Real>> s_sup, p_sup;
    const Index p = a.rows(), q = b.cols();

    auto coord_support = [](const VecX<Real>& probs, Index dim) {
        std::vector<WeightedSketch<Real>> out;
        for (Index i = 0; i < probs.size(); ++i) {
            if (probs(i) <= Real(0)) continue;
            MatX<Real> e = MatX<Real>::Zero(dim, 1);
            e(i, 0) = Real(1);
            out.push_back({std::move(e), probs(i)});
        }
        return out;
    };
    auto identity_support = [](Index dim) {
        std::vector<WeightedSketch<Real>> out;
        out.push_back({MatX<Real>::Identity(dim, dim), Real(1)});
        return out;
    };

    if (std::holds_alternative<CoordinatePair>(spec)) {
        s_sup = coord_support(row_probabilities(a), p);
        p_sup = coord_support(col_probabilities(b), q);
    } else if (std::holds_alternative<RowOnly>(spec)) {
        s_sup = coord_support(row_probabilities(a), p);
        p_sup = identity_support(q);
    } else if (std::holds_alternative<ColOnly>(spec)) {
        s_sup = identity_support(p);
        p_sup = coord_support(col_probabilities(b), q);
    } else if (std::holds_alternative<IdentityPair>(spec)) {
        s_sup = identity_support(p);
        p_sup = identity_support(q);
    } else if (const auto* bp = std::get_if<BlockPartition>(&spec)) {
        const auto rows = block_partition(p, bp->tau1);
        const auto cols = block_partition(q, bp->tau2);
        for (const auto& blk : rows)
            s_sup.push_back({selector_columns<Real>(p, blk), Real(1) / Real(rows.size())});
        for (const auto& blk : cols)
            p_sup.push_back({selector_columns<Real>(q, blk), Real(1) / Real(cols.size())});
    } else if (const auto* cd = std::get_if<CompleteDiscreteT<Real>>(&spec)) {
        for (std::size_t i = 0; i < cd->s_members.size(); ++i)
            if (cd->s_probs(static_cast<Index>(i)) > Real(0))
                s_sup.push_back({cd->s_members[i], cd->s_probs(static_cast<Index>(i))});
        for (std::size_t j = 0; j < cd->p_members.size(); ++j)
            if (cd->p_probs(static_cast<Index>(j)) > Real(0))
                p_sup.push_back({cd->p_members[j], cd->p_probs(static_cast<Index>(j))});
    } else {
        throw std::invalid_argument("enumerate_support: spec has no finite support");
    }
    if (s_sup.empty() || p_sup.empty())
        throw std::invalid_argument("enumerate_support: empty support");
    if (s_sup.size() * p_sup.size() > 1000000u)
        throw std::invalid_argument("enumerate_support: support size exceeds enumeration cap");
    return {std::move(s_sup), std::move(p_sup)};
}

template <class Real>
bool is_gaussian(const SketchSpecT<Real>& spec) {
    return std::holds_alternative<GaussianPairT<Real>>(spec);
}

}  // namespace detail

template <class Real = double>
struct ExpectedProjectorT {
    MatX<Real> E;                    // E[Z2 (x) Z1'], mn x mn
    std::optional<Real> mc_stderr;   // Frobenius standard error for MC estimates
};

using ExpectedProjector = ExpectedProjectorT<double>;

// E[Z2 (x) Z1'] for the given sketching family. Finite families are
// enumerated exactly; S and P are drawn independently, so the pair sum
// collapses to kron(E[Z2], E[Z1']). Gaussian sketching falls back to a
// joint-draw Monte Carlo average with an entrywise Frobenius stderr.
template <class Real>
ExpectedProjectorT<Real> expected_projector(const SketchSpecT<Real>& spec, const MatX<Real>& a,
                                            const MatX<Real>& b, const SpdMatT<Real>& g,
                                            Index mc_trials = 10000, Rng* rng = nullptr) {
    const Index m = a.cols(), n = b.rows();
    if (m * n > kron_dim_cap)
        throw std::invalid_argument("expected_projector: m*n exceeds cap");

    ExpectedProjectorT<Real> out;
    if (!detail::is_gaussian(spec)) {
        auto [s_sup, p_sup] = detail::enumerate_support(spec, a, b);
        MatX<Real> ez1 = MatX<Real>::Zero(m, m);
        for (const auto& ws : s_sup) ez1 += ws.prob * projector_Z1p(a, g, ws.member);
        MatX<Real> ez2 = MatX<Real>::Zero(n, n);
        for (const auto& wp : p_sup) ez2 += wp.prob * projector_Z2(b, wp.member);
        out.E = kron(ez2, ez1);
        return out;
    }

    if (mc_trials < 100)
        throw std::invalid_argument("expected_projector: need at least 100 MC trials");
    if (!rng) throw std::invalid_argument("expected_projector: MC estimate needs an rng");
    const auto& gp = std::get<GaussianPairT<Real>>(spec);
    MatX<Real> l1 = detail::gaussian_factor(gp.sigma1, a.rows(), "sigma1");
    MatX<Real> l2 = detail::gaussian_factor(gp.sigma2, b.cols(), "sigma2");

    MatX<Real> mean = MatX<Real>::Zero(m * n, m * n);
    MatX<Real> msq = MatX<Real>::Zero(m * n, m * n);
    for (Index t = 0; t < mc_trials; ++t) {
        const VecX<Real> zeta = detail::gaussian_vector(l1, a.rows(), *rng);
        const VecX<Real> eta = detail::gaussian_vector(l2, b.cols(), *rng);
        const MatX<Real> term =
            kron(projector_Z2(b, MatX<Real>(eta)), projector_Z1p(a, g, MatX<Real>(zeta)));
        mean += term;
        msq += term.cwiseProduct(term);
    }
    mean /= Real(mc_trials);
    msq /= Real(mc_trials);
    const MatX<Real> var = (msq - mean.cwiseProduct(mean)).cwiseMax(Real(0));
    out.E = std::move(mean);
    out.mc_stderr = std::sqrt(double(var.sum() / Real(mc_trials)));
    return out;
}

// 1 - lambda_min(E) for a symmetric expected projector (the G = I case, or
// any expectation already conjugated into symmetric form).
template <class Real>
Real rate_rho(const MatX<Real>& e) {
    if (e.rows() != e.cols() || e.rows() < 1)
        throw std::invalid_argument("rate_rho: matrix must be square");
    const Real scale = std::max(max_abs(e), Real(1));
    if ((e - e.transpose()).cwiseAbs().maxCoeff() > Real(1e-8) * scale)
        throw std::invalid_argument("rate_rho: expectation is not symmetric");
    Eigen::SelfAdjointEigenSolver<MatX<Real>> es((e + e.transpose()) / Real(2));
    return Real(1) - es.eigenvalues().minCoeff();
}

// 1 - sigma_min(E)^2 with sigma_min the smallest nonzero singular value.
template <class Real>
Real rate_rho_sigma(const MatX<Real>& e) {
    const Real s = min_singular(e);
    return Real(1) - s * s;
}

// Rank statistics of the sketched system (P'B') (x) (S'A) across draws.
struct DStats {
    double mean = 0.0;
    Index min = 0;
    Index max = 0;
    std::map<Index, double> dist;  // rank value -> probability (or MC frequency)
};

namespace detail {

// rank(M (x) N) = rank(M) rank(N); computing the factors separately avoids
// materializing the Kronecker product.
template <class Real>
Index sketch_rank(const MatX<Real>& a, const MatX<Real>& b, const MatX<Real>& s,
                  const MatX<Real>& p) {
    const Index r1 = numerical_rank(MatX<Real>(s.transpose() * a));
    const Index r2 = numerical_rank(MatX<Real>(b * p));
    return r1 * r2;
}

}  // namespace detail

template <class Real>
DStats d_statistics(const SketchSpecT<Real>& spec, const MatX<Real>& a, const MatX<Real>& b,
                    Index mc_trials = 10000, Rng* rng = nullptr) {
    DStats st;
    st.min = a.cols() * b.rows() + 1;
    auto add = [&st](Index d, double w) {
        st.mean += w * double(d);
        st.dist[d] += w;
        if (d < st.min) st.min = d;
        if (d > st.max) st.max = d;
    };
    if (!detail::is_gaussian(spec)) {
        auto [s_sup, p_sup] = detail::enumerate_support(spec, a, b);
        for (const auto& ws : s_sup)
            for (const auto& wp : p_sup)
                add(detail::sketch_rank(a, b, ws.member, wp.member), double(ws.prob * wp.prob));
        return st;
    }
    if (mc_trials < 100) throw std::invalid_argument("d_statistics: need at least 100 MC trials");
    if (!rng) throw std::invalid_argument("d_statistics: MC estimate needs an rng");
    const auto& gp = std::get<GaussianPairT<Real>>(spec);
    MatX<Real> l1 = detail::gaussian_factor(gp.sigma1, a.rows(), "sigma1");
    MatX<Real> l2 = detail::gaussian_factor(gp.sigma2, b.cols(), "sigma2");
    const double w = 1.0 / double(mc_trials);
    for (Index t = 0; t < mc_trials; ++t) {
        const VecX<Real> zeta = detail::gaussian_vector(l1, a.rows(), *rng);
        const VecX<Real> eta = detail::gaussian_vector(l2, b.cols(), *rng);
        add(detail::sketch_rank(a, b, MatX<Real>(zeta), MatX<Real>(eta)), w);
    }
    return st;
}

// 1 - E[d]/(mn): no sketching family can beat this expected rate.
template <class Real>
Real lower_bound_rho(const SketchSpecT<Real>& spec, const MatX<Real>& a, const MatX<Real>& b,
                     Index mc_trials = 10000, Rng* rng = nullptr) {
    const DStats st = d_statistics(spec, a, b, mc_trials, rng);
    return Real(1) - Real(st.mean) / Real(a.cols() * b.rows());
}

// Closed-form rate bound for a complete discrete family under the convenient
// (trace-weighted) probabilities. The extreme eigenvalues are taken from the
// compact Gram forms A'SS'A and BPP'B', whose spectra carry exactly the
// nonzero part of S'AA'S and P'B'BP; under the completeness hypothesis these
// are positive definite. With coordinate lists this reduces to the rank-one
// bound 1 - lambda_min(A'A) lambda_min(BB') / (|A|_F^2 |B|_F^2).
template <class Real>
Real rate_bound_convenient(const MatX<Real>& a, const MatX<Real>& b,
                           const std::vector<MatX<Real>>& s_list,
                           const std::vector<MatX<Real>>& p_list) {
    CompleteDiscreteT<Real> cd;
    cd.s_members = s_list;
    cd.p_members = p_list;
    cd.s_probs = convenient_probabilities(a, s_list);
    cd.p_probs = convenient_probabilities(MatX<Real>(b.transpose()), p_list);
    const CompleteDiscreteReport val = validate_complete_discrete(cd, a, b);
    if (!val.pass())
        throw std::invalid_argument("rate_bound_convenient: " + val.message);

    Index tau1 = 0, tau2 = 0;
    for (const auto& s : s_list) tau1 += s.cols();
    for (const auto& pm : p_list) tau2 += pm.cols();
    MatX<Real> s_stack(a.rows(), tau1);
    Index c = 0;
    for (const auto& s : s_list) {
        s_stack.middleCols(c, s.cols()) = s;
        c += s.cols();
    }
    MatX<Real> p_stack(b.cols(), tau2);
    c = 0;
    for (const auto& pm : p_list) {
        p_stack.middleCols(c, pm.cols()) = pm;
        c += pm.cols();
    }
    const MatX<Real> at_s = a.transpose() * s_stack;  // m x tau1
    const MatX<Real> b_p = b * p_stack;               // n x tau2
    const auto ga = sym_eig_extremes(MatX<Real>(at_s * at_s.transpose()));
    const auto gb = sym_eig_extremes(MatX<Real>(b_p * b_p.transpose()));
    const Real den = at_s.squaredNorm() * b_p.squaredNorm();
    const Real bound = Real(1) - ga.first * gb.first / den;

    // Cross-check on the spot whenever the exact rate is small enough to
    // compute: the bound must dominate it.
    if (a.cols() * b.rows() <= kron_dim_cap &&
        s_list.size() * p_list.size() <= 1000000u) {
        const SpdMatT<Real> gi = SpdMatT<Real>::identity(a.cols());
        const SketchSpecT<Real> spec = cd;
        const Real rho = rate_rho(expected_projector(spec, a, b, gi).E);
        if (rho > bound + Real(1e-9))
            throw std::logic_error("rate_bound_convenient: exact rate exceeds the bound");
    }
    return bound;
}

// Gaussian sketching rate bound. Sigma arguments may be empty (identity).
template <class Real>
Real rate_bound_gauss(const MatX<Real>& a, const MatX<Real>& b, const MatX<Real>& sigma1 = {},
                      const MatX<Real>& sigma2 = {}) {
    MatX<Real> omega1, omega2;
    if (sigma1.size() == 0) {
        omega1 = a.transpose() * a;
    } else {
        SpdMatT<Real> s1(sigma1);
        if (s1.rows() != a.rows())
            throw std::invalid_argument("rate_bound_gauss: sigma1 dimension mismatch");
        omega1 = a.transpose() * s1.matrix() * a;
    }
    if (sigma2.size() == 0) {
        omega2 = b * b.transpose();
    } else {
        SpdMatT<Real> s2(sigma2);
        if (s2.rows() != b.cols())
            throw std::invalid_argument("rate_bound_gauss: sigma2 dimension mismatch");
        omega2 = b * s2.matrix() * b.transpose();
    }
    const auto e1 = sym_eig_extremes(omega1);
    const auto e2 = sym_eig_extremes(omega2);
    const Real tol = Real(1e-12);
    if (e1.first <= tol * std::max(e1.second, Real(1)) ||
        e2.first <= tol * std::max(e2.second, Real(1)))
        throw std::invalid_argument("rate_bound_gauss: sketched Gram matrix is rank deficient");
    const Real pi = Real(3.14159265358979323846);
    // lambda_min of the Kronecker product of two PSD matrices factorizes.
    return Real(1) - Real(4) * (e2.first * e1.first) /
                         (pi * pi * omega2.trace() * omega1.trace());
}

// Reference oracle for a single update: solve the sketched projection
//     min |X' - X|_{F(G)}  s.t.  S'A X' BP = S'CP
// through its vectorized normal form and a minimum-norm least squares
// solution. Shares no code path with general_step beyond the pseudoinverse.
template <class Real>
MatX<Real> brute_force_project(const MatX<Real>& x, const MatrixEquationT<Real>& eq,
                               const MatX<Real>& s, const MatX<Real>& p) {
    if (s.rows() != eq.p() || p.rows() != eq.q())
        throw std::invalid_argument("brute_force_project: sketch shape mismatch");
    if (x.rows() != eq.m() || x.cols() != eq.n())
        throw std::invalid_argument("brute_force_project: X shape mismatch");
    const MatX<Real> gis = eq.G.inv_sqrt();
    const MatX<Real> sa_g = s.transpose() * eq.A * gis;  // tau1 x m
    const MatX<Real> bp = eq.B * p;                      // n x tau2
    const MatX<Real> nmat = kron(MatX<Real>(bp.transpose()), sa_g);
    const VecX<Real> rhs = vec(MatX<Real>(s.transpose() * (eq.C - eq.A * x * eq.B) * p));
    const VecX<Real> y = pseudoinverse(nmat) * rhs;
    return x + gis * unvec(y, eq.m(), eq.n());
}

template <class Real = double>
struct RateReportT {
    Real rho_exact = Real(0);
    Real rho_sigma = Real(0);
    Real lower_bound = Real(0);
    std::optional<Real> closed_form_bound;
    DStats d_stats;
    std::optional<Real> mc_stderr;
    std::optional<MatX<Real>> E;
};

using RateReport = RateReportT<double>;

// Assemble the full rate picture for one sketching family. For G != I the
// expectation is conjugated by G^{1/2} so the spectrum can be read off a
// symmetric matrix. keep_e controls whether the (mn)^2 expectation matrix is
// returned to the caller.
template <class Real>
RateReportT<Real> rate_report(const SketchSpecT<Real>& spec, const MatX<Real>& a,
                              const MatX<Real>& b, const SpdMatT<Real>& g, bool keep_e = false,
                              Index mc_trials = 10000, Rng* rng = nullptr) {
    RateReportT<Real> rep;
    ExpectedProjectorT<Real> ep = expected_projector(spec, a, b, g, mc_trials, rng);
    MatX<Real> e_sym;
    if (g.is_identity()) {
        e_sym = ep.E;
    } else {
        const MatX<Real> eye = MatX<Real>::Identity(b.rows(), b.rows());
        e_sym = kron(eye, g.sqrt()) * ep.E * kron(eye, g.inv_sqrt());
    }
    e_sym = ((e_sym + e_sym.transpose()) / Real(2)).eval();
    rep.rho_exact = rate_rho(e_sym);
    rep.rho_sigma = rate_rho_sigma(e_sym);
    rep.d_stats = d_statistics(spec, a, b, mc_trials, rng);
    rep.lower_bound = Real(1) - Real(rep.d_stats.mean) / Real(a.cols() * b.rows());
    rep.mc_stderr = ep.mc_stderr;

    if (std::holds_alternative<CoordinatePair>(spec)) {
        std::vector<MatX<Real>> sl, pl;
        for (Index i = 0; i < a.rows(); ++i) sl.push_back(detail::unit_column<Real>(a.rows(), i));
        for (Index j = 0; j < b.cols(); ++j) pl.push_back(detail::unit_column<Real>(b.cols(), j));
        try {
            rep.closed_form_bound = rate_bound_convenient(a, b, sl, pl);
        } catch (const std::invalid_argument&) {
            // Rank-deficient data have no convenient-probability bound.
        }
    } else if (const auto* cd = std::get_if<CompleteDiscreteT<Real>>(&spec)) {
        try {
            rep.closed_form_bound = rate_bound_convenient(a, b, cd->s_members, cd->p_members);
        } catch (const std::invalid_argument&) {
        }
    } else if (std::holds_alternative<GaussianPairT<Real>>(spec)) {
        const auto& gp = std::get<GaussianPairT<Real>>(spec);
        try {
            rep.closed_form_bound = rate_bound_gauss(a, b, gp.sigma1, gp.sigma2);
        } catch (const std::invalid_argument&) {
        }
    }
    if (keep_e) rep.E = std::move(ep.E);
    return rep;
}

// --- lemma and appendix verification ----------------------------------------

template <class Real = double>
struct GaussLemmaReportT {
    Real margin = Real(0);      // lambda_min(E_hat - (2/pi) Omega / Tr(Omega))
    Real mc_stderr = Real(0);   // Frobenius stderr of E_hat
    Index trials = 0;
    bool pass = false;          // margin >= -3 stderr
};

using GaussLemmaReport = GaussLemmaReportT<double>;

// Monte Carlo check of the directional second-moment bound
// E[xi xi' / xi'xi] >= (2/pi) Omega / Tr(Omega) for xi ~ N(0, Omega).
template <class Real>
GaussLemmaReportT<Real> check_gaussian_lemma(const SpdMatT<Real>& omega, Index trials, Rng& rng) {
    if (trials < 100)
        throw std::invalid_argument("check_gaussian_lemma: need at least 100 trials");
    const Index d = omega.rows();
    Eigen::LLT<MatX<Real>> llt(omega.matrix());
    const MatX<Real> l = llt.matrixL();

    MatX<Real> mean = MatX<Real>::Zero(d, d);
    MatX<Real> msq = MatX<Real>::Zero(d, d);
    for (Index t = 0; t < trials; ++t) {
        VecX<Real> z(d);
        for (Index i = 0; i < d; ++i) z(i) = Real(rng.normal());
        const VecX<Real> xi = l * z;
        const Real nn = xi.squaredNorm();
        if (nn <= Real(0)) continue;
        const MatX<Real> term = (xi * xi.transpose()) / nn;
        mean += term;
        msq += term.cwiseProduct(term);
    }
    mean /= Real(trials);
    msq /= Real(trials);
    const MatX<Real> var = (msq - mean.cwiseProduct(mean)).cwiseMax(Real(0));

    const Real pi = Real(3.14159265358979323846);
    const MatX<Real> target = (Real(2) / pi) * omega.matrix() / omega.matrix().trace();
    GaussLemmaReportT<Real> rep;
    rep.trials = trials;
    rep.margin = sym_eig_extremes(MatX<Real>(mean - target)).first;
    rep.mc_stderr = Real(std::sqrt(double(var.sum() / Real(trials))));
    rep.pass = rep.margin >= -Real(3) * rep.mc_stderr;
    return rep;
}

struct AppendixReport {
    double ep_min_margin = 0.0;          // lambda_min(E[H^2] - E[H]'E[H]) over instances
    double kron_monotone_min_margin = 0.0;
    Index pd_agreement_failures = 0;
    Index instances = 0;
    bool pass = false;
};

// Randomized verification of the three supporting facts the rate theory
// leans on: the second-moment inequality for random SPD matrices, the
// Kronecker eigenvalue monotonicity under the Loewner order and the
// equivalence between positive definiteness of the expected weighted
// projector and full column rank of the stacked sketch.
template <class Real = double>
AppendixReport check_appendix_inequalities(Index dim, Index instances, Rng& rng) {
    if (dim < 1 || dim > 8) throw std::invalid_argument("check_appendix_inequalities: dim in [1,8]");
    if (instances < 1) throw std::invalid_argument("check_appendix_inequalities: need instances");
    AppendixReport rep;
    rep.instances = instances;
    rep.ep_min_margin = 1e300;
    rep.kron_monotone_min_margin = 1e300;

    auto random_mat = [&rng](Index r, Index c) {
        MatX<Real> m(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) m(i, j) = Real(rng.normal());
        return m;
    };
    auto random_psd = [&](Index d) {
        MatX<Real> r = random_mat(d, d);
        return MatX<Real>(r.transpose() * r);
    };

    for (Index inst = 0; inst < instances; ++inst) {
        // E[H^2] >= E[H]^2 for a finite family of symmetric matrices.
        {
            const int k = 2 + int(rng.below(3));
            std::vector<MatX<Real>> hs;
            VecX<Real> w(k);
            for (int i = 0; i < k; ++i) {
                hs.push_back(random_psd(dim));
                w(i) = Real(rng.uniform()) + Real(0.1);
            }
            w /= w.sum();
            MatX<Real> eh = MatX<Real>::Zero(dim, dim), eh2 = MatX<Real>::Zero(dim, dim);
            for (int i = 0; i < k; ++i) {
                eh += w(i) * hs[size_t(i)];
                eh2 += w(i) * hs[size_t(i)] * hs[size_t(i)];
            }
            const double margin =
                double(sym_eig_extremes(MatX<Real>(eh2 - eh.transpose() * eh)).first);
            rep.ep_min_margin = std::min(rep.ep_min_margin, margin);
        }
        // lambda_min(A2' (x) B2) >= lambda_min(A1' (x) B1) when A2 >= A1 >= 0,
        // B2 >= B1 >= 0, via the literally formed Kronecker products.
        {
            const MatX<Real> a1 = random_psd(dim), b1 = random_psd(dim);
            const MatX<Real> a2 = a1 + random_psd(dim), b2 = b1 + random_psd(dim);
            const double l2 =
                double(sym_eig_extremes(kron(MatX<Real>(a2.transpose()), b2)).first);
            const double l1 =
                double(sym_eig_extremes(kron(MatX<Real>(a1.transpose()), b1)).first);
            rep.kron_monotone_min_margin = std::min(rep.kron_monotone_min_margin, l2 - l1);
        }
        // PD of E[Z2 (x) G Z1'] against full rank of the stacked sketches.
        {
            const bool deficient = rng.below(2) == 0;
            const Index p = deficient ? std::max<Index>(1, dim - 1) : dim + 1;
            const MatX<Real> a = random_mat(p, dim);
            const MatX<Real> b = random_mat(dim, dim + 1);
            CompleteDiscreteT<Real> cd;
            for (Index i = 0; i < p; ++i) {
                MatX<Real> e = MatX<Real>::Zero(p, 1);
                e(i, 0) = Real(1);
                cd.s_members.push_back(std::move(e));
            }
            cd.s_probs = VecX<Real>::Constant(p, Real(1) / Real(p));
            cd.p_members.push_back(MatX<Real>::Identity(dim + 1, dim + 1));
            cd.p_probs = VecX<Real>::Ones(1);

            const SpdMatT<Real> g(random_psd(dim) + MatX<Real>::Identity(dim, dim));
            MatX<Real> ez1t = MatX<Real>::Zero(dim, dim);
            for (Index i = 0; i < p; ++i)
                ez1t += cd.s_probs(i) * g.matrix() * projector_Z1p(a, g, cd.s_members[size_t(i)]);
            const MatX<Real> ez2 = projector_Z2(b, cd.p_members[0]);
            const MatX<Real> e = kron(ez2, MatX<Real>((ez1t + ez1t.transpose()) / Real(2)));
            const auto ext = sym_eig_extremes(e);
            const bool pd = ext.first > Real(1e-9) * std::max(ext.second, Real(1));
            const bool full_rank =
                numerical_rank(MatX<Real>(a.transpose())) == dim && numerical_rank(b) == dim;
            if (pd != full_rank) ++rep.pd_agreement_failures;
        }
    }
    rep.pass = rep.ep_min_margin >= -1e-10 && rep.kron_monotone_min_margin >= -1e-10 &&
               rep.pd_agreement_failures == 0;
    return rep;
}

}  // namespace mxsketch
