#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mxsketch/linalg.hpp"
#include "mxsketch/rng.hpp"
#include "mxsketch/types.hpp"

namespace mxsketch {

// Row index distribution proportional to squared row norms of A.
template <class Real>
VecX<Real> row_probabilities(const MatX<Real>& a) {
    if (a.rows() < 1 || a.cols() < 1)
        throw std::invalid_argument("row_probabilities: matrix must be nonempty");
    require_finite(a, "row_probabilities");
    VecX<Real> p = a.rowwise().squaredNorm();
    const Real total = p.sum();
    if (total <= Real(0))
        throw std::invalid_argument("row_probabilities: zero matrix has no distribution");
    return p / total;
}

template <class Real>
VecX<Real> col_probabilities(const MatX<Real>& b) {
    if (b.rows() < 1 || b.cols() < 1)
        throw std::invalid_argument("col_probabilities: matrix must be nonempty");
    require_finite(b, "col_probabilities");
    VecX<Real> p = b.colwise().squaredNorm().transpose();
    const Real total = p.sum();
    if (total <= Real(0))
        throw std::invalid_argument("col_probabilities: zero matrix has no distribution");
    return p / total;
}

// Member weights Tr(S_i' A A' S_i) normalized by their sum, the "convenient"
// distribution under which the closed-form rate bound holds. Members whose
// sketched matrix S_i'A loses row rank are rejected outright. For the right
// side pass B' and the P list.
template <class Real>
VecX<Real> convenient_probabilities(const MatX<Real>& a, const std::vector<MatX<Real>>& s_list) {
    if (s_list.empty())
        throw std::invalid_argument("convenient_probabilities: member list is empty");
    VecX<Real> w(static_cast<Index>(s_list.size()));
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        const MatX<Real>& s = s_list[i];
        if (s.rows() != a.rows() || s.cols() < 1)
            throw std::invalid_argument("convenient_probabilities: member shape mismatch");
        MatX<Real> sa = s.transpose() * a;
        if (numerical_rank(sa) != sa.rows())
            throw std::invalid_argument("convenient_probabilities: member with rank-deficient sketched matrix");
        w(static_cast<Index>(i)) = sa.squaredNorm();
    }
    const Real total = w.sum();
    if (total <= Real(0))
        throw std::invalid_argument("convenient_probabilities: all member weights vanish");
    return w / total;
}

// Contiguous index blocks of size tau; the final block absorbs the remainder.
inline std::vector<std::vector<Index>> block_partition(Index dim, Index tau) {
    if (dim < 1 || tau < 1 || tau > dim)
        throw std::invalid_argument("block_partition: need 1 <= tau <= dim");
    const Index s = (dim + tau - 1) / tau;
    std::vector<std::vector<Index>> blocks(static_cast<std::size_t>(s));
    for (Index i = 0; i < s; ++i) {
        const Index lo = i * tau;
        const Index hi = (i + 1 == s) ? dim : lo + tau;
        for (Index k = lo; k < hi; ++k) blocks[static_cast<std::size_t>(i)].push_back(k);
    }
    return blocks;
}

// Inverse-CDF draw from a finite distribution. A single uniform decides the
// outcome; boundary ties go to the lower index and zero-weight entries can
// never be produced.
template <class Real>
Index sample_categorical(const VecX<Real>& probs, Rng& rng) {
    if (probs.size() < 1)
        throw std::invalid_argument("sample_categorical: empty distribution");
    Real total = Real(0);
    for (Index i = 0; i < probs.size(); ++i) {
        if (!(probs(i) >= Real(0)))
            throw std::invalid_argument("sample_categorical: negative or non-finite weight");
        total += probs(i);
    }
    if (std::abs(double(total) - 1.0) > 1e-8)
        throw std::invalid_argument("sample_categorical: weights must sum to one");
    const Real u = Real(rng.uniform());
    Real c = Real(0);
    Index fallback = -1;
    for (Index i = 0; i < probs.size(); ++i) {
        if (probs(i) <= Real(0)) continue;
        fallback = i;
        c += probs(i);
        if (u <= c) return i;
    }
    return fallback;  // u landed in the rounding slack past the last mass
}

// --- sketch specifications -------------------------------------------------

struct CoordinatePair {};   // S = e_i, P = e_j with squared-norm weights
struct RowOnly {};          // S = e_i, P = I
struct ColOnly {};          // S = I, P = e_j
struct IdentityPair {};     // S = I, P = I (deterministic)

struct BlockPartition {
    Index tau1 = 1;
    Index tau2 = 1;
};

template <class Real = double>
struct CompleteDiscreteT {
    std::vector<MatX<Real>> s_members;
    VecX<Real> s_probs;
    std::vector<MatX<Real>> p_members;
    VecX<Real> p_probs;
};

template <class Real = double>
struct GaussianPairT {
    // Empty covariance means identity.
    MatX<Real> sigma1;
    MatX<Real> sigma2;
};

template <class Real = double>
using SketchSpecT = std::variant<CoordinatePair, RowOnly, ColOnly, IdentityPair, BlockPartition,
                                 CompleteDiscreteT<Real>, GaussianPairT<Real>>;

using CompleteDiscrete = CompleteDiscreteT<double>;
using GaussianPair = GaussianPairT<double>;
using SketchSpec = SketchSpecT<double>;

inline const char* sketch_kind_name(std::size_t variant_index) {
    switch (variant_index) {
        case 0: return "coord";
        case 1: return "row";
        case 2: return "col";
        case 3: return "identity";
        case 4: return "block";
        case 5: return "complete-discrete";
        case 6: return "gauss";
        default: return "unknown";
    }
}

// One realized (S, P) pair. Discrete families also carry the member indices
// so that specialized updates can skip the matrix form entirely.
template <class Real = double>
struct SketchDrawT {
    MatX<Real> S;
    MatX<Real> P;
    std::optional<Index> s_index;
    std::optional<Index> p_index;
};

using SketchDraw = SketchDrawT<double>;

namespace detail {

template <class Real>
MatX<Real> unit_column(Index dim, Index i) {
    MatX<Real> e = MatX<Real>::Zero(dim, 1);
    e(i, 0) = Real(1);
    return e;
}

template <class Real>
MatX<Real> selector_columns(Index dim, const std::vector<Index>& idx) {
    MatX<Real> s = MatX<Real>::Zero(dim, static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k], static_cast<Index>(k)) = Real(1);
    return s;
}

template <class Real>
MatX<Real> gaussian_factor(const MatX<Real>& sigma, Index dim, const char* side) {
    if (sigma.size() == 0) return MatX<Real>();
    if (sigma.rows() != dim || sigma.cols() != dim)
        throw std::invalid_argument(std::string("draw: covariance dimension mismatch on ") + side);
    SpdMatT<Real> spd(sigma);  // validates symmetry and positive definiteness
    Eigen::LLT<MatX<Real>> llt(spd.matrix());
    return MatX<Real>(llt.matrixL());
}

template <class Real>
VecX<Real> gaussian_vector(const MatX<Real>& chol, Index dim, Rng& rng) {
    VecX<Real> z(dim);
    for (Index i = 0; i < dim; ++i) z(i) = Real(rng.normal());
    if (chol.size() == 0) return z;
    return chol * z;
}

}  // namespace detail

// Sample one sketching pair for the equation matrices A (p x m) and B (n x q).
template <class Real>
SketchDrawT<Real> draw(const SketchSpecT<Real>& spec, const MatX<Real>& a, const MatX<Real>& b,
                       Rng& rng) {
    const Index p = a.rows();
    const Index q = b.cols();
    SketchDrawT<Real> out;

    if (std::holds_alternative<CoordinatePair>(spec)) {
        const Index i = sample_categorical(row_probabilities(a), rng);
        const Index j = sample_categorical(col_probabilities(b), rng);
        out.S = detail::unit_column<Real>(p, i);
        out.P = detail::unit_column<Real>(q, j);
        out.s_index = i;
        out.p_index = j;
    } else if (std::holds_alternative<RowOnly>(spec)) {
        const Index i = sample_categorical(row_probabilities(a), rng);
        out.S = detail::unit_column<Real>(p, i);
        out.P = MatX<Real>::Identity(q, q);
        out.s_index = i;
    } else if (std::holds_alternative<ColOnly>(spec)) {
        const Index j = sample_categorical(col_probabilities(b), rng);
        out.S = MatX<Real>::Identity(p, p);
        out.P = detail::unit_column<Real>(q, j);
        out.p_index = j;
    } else if (std::holds_alternative<IdentityPair>(spec)) {
        out.S = MatX<Real>::Identity(p, p);
        out.P = MatX<Real>::Identity(q, q);
        out.s_index = 0;
        out.p_index = 0;
    } else if (const auto* bp = std::get_if<BlockPartition>(&spec)) {
        const auto rows = block_partition(p, bp->tau1);
        const auto cols = block_partition(q, bp->tau2);
        const Index k = static_cast<Index>(rng.below(rows.size()));
        const Index l = static_cast<Index>(rng.below(cols.size()));
        out.S = detail::selector_columns<Real>(p, rows[static_cast<std::size_t>(k)]);
        out.P = detail::selector_columns<Real>(q, cols[static_cast<std::size_t>(l)]);
        out.s_index = k;
        out.p_index = l;
    } else if (const auto* cd = std::get_if<CompleteDiscreteT<Real>>(&spec)) {
        if (cd->s_members.empty() || cd->p_members.empty())
            throw std::invalid_argument("draw: complete discrete spec has empty member list");
        const Index i = sample_categorical(cd->s_probs, rng);
        const Index j = sample_categorical(cd->p_probs, rng);
        out.S = cd->s_members[static_cast<std::size_t>(i)];
        out.P = cd->p_members[static_cast<std::size_t>(j)];
        if (out.S.rows() != p || out.P.rows() != q)
            throw std::invalid_argument("draw: complete discrete member shape mismatch");
        out.s_index = i;
        out.p_index = j;
    } else if (const auto* gp = std::get_if<GaussianPairT<Real>>(&spec)) {
        const MatX<Real> l1 = detail::gaussian_factor(gp->sigma1, p, "sigma1");
        const MatX<Real> l2 = detail::gaussian_factor(gp->sigma2, q, "sigma2");
        out.S = detail::gaussian_vector(l1, p, rng);
        out.P = detail::gaussian_vector(l2, q, rng);
    } else {
        throw std::logic_error("draw: unhandled sketch variant");
    }
    return out;
}

// --- complete discrete validation ------------------------------------------

struct CompleteDiscreteReport {
    bool members_shape_ok = true;
    bool probs_ok = true;
    bool s_members_full_rank = true;
    bool p_members_full_rank = true;
    bool s_stacked_full_rank = true;
    bool p_stacked_full_rank = true;
    std::string message;

    bool pass() const {
        return members_shape_ok && probs_ok && s_members_full_rank && p_members_full_rank &&
               s_stacked_full_rank && p_stacked_full_rank;
    }
};

template <class Real>
CompleteDiscreteReport validate_complete_discrete(const CompleteDiscreteT<Real>& cd,
                                                  const MatX<Real>& a, const MatX<Real>& b) {
    CompleteDiscreteReport rep;
    auto note = [&rep](const std::string& s) {
        if (!rep.message.empty()) rep.message += "; ";
        rep.message += s;
    };

    if (cd.s_members.empty() || cd.p_members.empty() ||
        static_cast<Index>(cd.s_members.size()) != cd.s_probs.size() ||
        static_cast<Index>(cd.p_members.size()) != cd.p_probs.size()) {
        rep.members_shape_ok = false;
        note("member lists and probability vectors must be nonempty and aligned");
        return rep;
    }
    for (const auto& s : cd.s_members)
        if (s.rows() != a.rows() || s.cols() < 1) rep.members_shape_ok = false;
    for (const auto& pm : cd.p_members)
        if (pm.rows() != b.cols() || pm.cols() < 1) rep.members_shape_ok = false;
    if (!rep.members_shape_ok) {
        note("member shapes do not match the equation matrices");
        return rep;
    }

    auto check_probs = [&](const VecX<Real>& pr) {
        Real total = Real(0);
        for (Index i = 0; i < pr.size(); ++i) {
            if (!(pr(i) > Real(0))) return false;
            total += pr(i);
        }
        return std::abs(double(total) - 1.0) <= 1e-8;
    };
    if (!check_probs(cd.s_probs) || !check_probs(cd.p_probs)) {
        rep.probs_ok = false;
        note("probabilities must be strictly positive and sum to one");
    }

    Index sum_tau1 = 0, sum_tau2 = 0;
    for (const auto& s : cd.s_members) {
        sum_tau1 += s.cols();
        MatX<Real> sa = s.transpose() * a;
        if (numerical_rank(sa) != sa.rows()) rep.s_members_full_rank = false;
    }
    for (const auto& pm : cd.p_members) {
        sum_tau2 += pm.cols();
        MatX<Real> pb = pm.transpose() * b.transpose();
        if (numerical_rank(pb) != pb.rows()) rep.p_members_full_rank = false;
    }
    if (!rep.s_members_full_rank) note("some S_i' A is row rank deficient");
    if (!rep.p_members_full_rank) note("some P_j' B' is row rank deficient");

    MatX<Real> s_stack(a.rows(), sum_tau1);
    Index c = 0;
    for (const auto& s : cd.s_members) {
        s_stack.middleCols(c, s.cols()) = s;
        c += s.cols();
    }
    MatX<Real> p_stack(b.cols(), sum_tau2);
    c = 0;
    for (const auto& pm : cd.p_members) {
        p_stack.middleCols(c, pm.cols()) = pm;
        c += pm.cols();
    }
    MatX<Real> at_s = a.transpose() * s_stack;   // m x sum(tau1)
    MatX<Real> b_p = b * p_stack;                // n x sum(tau2)
    if (numerical_rank(at_s) != a.cols()) {
        rep.s_stacked_full_rank = false;
        note("stacked A' S is row rank deficient");
    }
    if (numerical_rank(b_p) != b.rows()) {
        rep.p_stacked_full_rank = false;
        note("stacked B P is row rank deficient");
    }
    if (rep.pass()) rep.message = "ok";
    return rep;
}

}  // namespace mxsketch
