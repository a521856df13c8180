#pragma once

#include <cmath>
#include <stdexcept>

#include "mxsketch/types.hpp"

namespace mxsketch {

// Squared relative error |X - Xstar|_F^2 / |Xstar|_F^2, the quantity the
// stop rules and the benchmark tables monitor.
template <class Real>
Real relative_error(const MatX<Real>& x, const MatX<Real>& xstar) {
    if (x.rows() != xstar.rows() || x.cols() != xstar.cols())
        throw std::invalid_argument("relative_error: shape mismatch");
    const Real den = xstar.squaredNorm();
    if (!(den > Real(0))) throw std::invalid_argument("relative_error: Xstar must be nonzero");
    return (x - xstar).squaredNorm() / den;
}

// Global (single-window) structural similarity between a reconstruction and
// a reference image. Population statistics; L defaults to the dynamic range
// of the reference and falls back to 1 for constant references.
template <class Real>
Real ssim(const MatX<Real>& x, const MatX<Real>& ref, Real dynamic_range = Real(-1),
          Real k1 = Real(0.01), Real k2 = Real(0.03)) {
    if (x.rows() != ref.rows() || x.cols() != ref.cols())
        throw std::invalid_argument("ssim: shape mismatch");
    if (x.size() < 1) throw std::invalid_argument("ssim: empty image");
    if (!(k1 > Real(0)) || !(k2 > Real(0)))
        throw std::invalid_argument("ssim: stabilizer constants must be positive");
    Real L = dynamic_range;
    if (L < Real(0)) {
        L = ref.maxCoeff() - ref.minCoeff();
        if (!(L > Real(0))) L = Real(1);
    }
    const Real ninv = Real(1) / Real(x.size());
    const Real mu_x = x.sum() * ninv;
    const Real mu_y = ref.sum() * ninv;
    const Real var_x = (x.array() - mu_x).square().sum() * ninv;
    const Real var_y = (ref.array() - mu_y).square().sum() * ninv;
    const Real cov = ((x.array() - mu_x) * (ref.array() - mu_y)).sum() * ninv;
    const Real c1 = (k1 * L) * (k1 * L);
    const Real c2 = (k2 * L) * (k2 * L);
    return ((Real(2) * mu_x * mu_y + c1) * (Real(2) * cov + c2)) /
           ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
}

// Speed-up ratio of a reference timing over a contender.
inline double speedup(double reference_seconds, double contender_seconds) {
    if (!(reference_seconds >= 0.0) || !(contender_seconds > 0.0))
        throw std::invalid_argument("speedup: timings must be nonnegative / positive");
    return reference_seconds / contender_seconds;
}

}  // namespace mxsketch
