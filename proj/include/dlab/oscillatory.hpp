#pragma once

// The three oscillatory integrals behind the pointwise estimate,
//
//   I_p(t, x) = int e^{i x xi} e^{-i t xi^2 / 2} g_p(xi) dxi
//
// with g_1 = xi^{-1} u0^, g_2 = xi^{-2} u0^, g_3 = xi^{-1} d/dxi u0^, and the
// reconstruction they imply for t != 0:
//
//   u(t, x) = (2 pi)^{-1/2} t^{-1} (x I_1 + i I_2 - i I_3)
//
// The integrals only exist under the admission hypotheses, so parts() runs
// the compliance check first and refuses divergent data.
//
// Quadrature is symmetric midpoint over the datum's spectral support, with
// the cell count doubled until two consecutive refinements move every part
// by less than the plan tolerance. Cells are anchored so xi = 0 is a cell
// boundary, never a sample.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dlab/datum.hpp"
#include "dlab/errors.hpp"
#include "dlab/fourier.hpp"
#include "dlab/hypotheses.hpp"
#include "dlab/numeric.hpp"
#include "dlab/propagator.hpp"

namespace dlab::oscillatory {

struct PartIntegrals {
    Complex I1{0.0, 0.0};
    Complex I2{0.0, 0.0};
    Complex I3{0.0, 0.0};
    double error_estimate = 0.0;  // movement of the final refinement
    std::size_t points = 0;       // midpoint cells at convergence
};

namespace detail {

constexpr std::size_t kCellCap = std::size_t(1) << 22;

struct PartSums {
    Complex s1, s2, s3;
};

// midpoint pass with N cells over [-Xi, Xi]; the quadratic phase advances
// by a two-rotator recurrence, resynchronized every 1024 cells
template <typename F, typename G>
PartSums midpoint_pass(F&& uhat, G&& duhat, double t, double x, double Xi, std::size_t N) {
    const double h = 2.0 * Xi / static_cast<double>(N);
    PairwiseAccumulator<Complex> a1, a2, a3;
    Complex z(1.0, 0.0), r(1.0, 0.0);
    const Complex s = std::polar(1.0, -t * h * h);
    for (std::size_t k = 0; k < N; ++k) {
        const double xi = -Xi + (static_cast<double>(k) + 0.5) * h;
        if (k % 1024 == 0) {
            z = std::polar(1.0, x * xi - 0.5 * t * xi * xi);
            r = std::polar(1.0, x * h - t * h * (xi + 0.5 * h));
        }
        const Complex f = uhat(xi);
        const Complex df = duhat(xi);
        a1.add(z * (f / xi));
        a2.add(z * (f / (xi * xi)));
        a3.add(z * (df / xi));
        z *= r;
        r *= s;
    }
    PartSums out;
    out.s1 = a1.total() * h;
    out.s2 = a2.total() * h;
    out.s3 = a3.total() * h;
    return out;
}

inline double movement(const PartSums& a, const PartSums& b) {
    return std::max({std::abs(a.s1 - b.s1), std::abs(a.s2 - b.s2), std::abs(a.s3 - b.s3)});
}

}  // namespace detail

inline PartIntegrals parts(const datum::InitialDatum& d, double t, double x,
                           const fourier::TransformPlan& plan = {}) {
    plan.validate();
    if (!std::isfinite(t) || !std::isfinite(x))
        throw DomainError("oscillatory", "t and x must be finite");

    auto report = hypotheses::check(d);
    if (!report.compliant)
        throw HypothesisError("oscillatory",
                              "datum fails the admission hypotheses; the part integrals "
                              "are not defined");

    auto spectrum = propagator::detail::base_spectrum(d, plan);
    auto scan = fourier::scan_support(spectrum, 1e-14);
    PartIntegrals out;
    if (scan.peak == 0.0) return out;
    const double Xi = std::min(plan.xi_max(), scan.radius + plan.dxi());

    auto uhat = datum::spectral(d);
    auto duhat = datum::spectral_derivative(d);

    const double sweep = 2.0 * Xi * (std::abs(t) * Xi + std::abs(x)) / (M_PI / 2.0);
    std::size_t N = next_pow2(static_cast<std::size_t>(std::max(256.0, sweep)));

    auto prev = detail::midpoint_pass(uhat, duhat, t, x, Xi, N);
    double d_prev = std::numeric_limits<double>::infinity();
    while (true) {
        if (2 * N > detail::kCellCap)
            throw ResolutionError("oscillatory",
                                  "part integrals did not settle within the cell budget; "
                                  "reduce |t| or |x| or relax the plan tolerance");
        N *= 2;
        auto cur = detail::midpoint_pass(uhat, duhat, t, x, Xi, N);
        double d_cur = detail::movement(cur, prev);
        if (d_cur < plan.tolerance && d_prev < plan.tolerance) {
            out.I1 = cur.s1;
            out.I2 = cur.s2;
            out.I3 = cur.s3;
            out.error_estimate = d_cur;
            out.points = N;
            return out;
        }
        prev = cur;
        d_prev = d_cur;
    }
}

inline Complex assemble(const PartIntegrals& p, double t, double x) {
    if (t == 0.0)
        throw DomainError("oscillatory", "reconstruction needs t != 0; use the datum itself");
    const Complex i(0.0, 1.0);
    return (x * p.I1 + i * p.I2 - i * p.I3) / (t * std::sqrt(2.0 * M_PI));
}

inline Complex reconstruct(const datum::InitialDatum& d, double t, double x,
                           const fourier::TransformPlan& plan = {}) {
    if (t == 0.0)
        throw DomainError("oscillatory", "reconstruction needs t != 0; use the datum itself");
    return assemble(parts(d, t, x, plan), t, x);
}

// how well the finite-difference derivative of the free phase matches its
// analytic value -i t xi e^{-i t xi^2/2}; a sanity probe for phase handling
inline double phase_identity_check(double t, const std::vector<double>& xi_samples) {
    const double h = 1e-6;
    double worst = 0.0;
    for (double xi : xi_samples) {
        auto phase = [t](double s) { return std::polar(1.0, -0.5 * t * s * s); };
        Complex fd = (phase(xi + h) - phase(xi - h)) / (2.0 * h);
        Complex an = Complex(0.0, -t * xi) * phase(xi);
        worst = std::max(worst, std::abs(fd - an));
    }
    return worst;
}

}  // namespace dlab::oscillatory
