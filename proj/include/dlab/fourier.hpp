#pragma once

// Transform layer. Convention (unitary, angular frequency):
//
//   forward:  v^(xi) = (2*pi)^{-1/2} Int e^{-i x xi} v(x) dx
//   inverse:  v(x)   = (2*pi)^{-1/2} Int e^{+i x xi} v^(xi) dxi
//
// The discrete realization lives on the plan grids
//
//   x_j  = -L + j*dx,          dx  = 2L/n,        j = 0..n-1
//   xi_k = -pi/dx + k*dxi,     dxi = pi/L,        k = 0..n-1
//
// and is an exactly unitary pair: inverse(forward(u)) == u up to rounding,
// and the rectangle-rule norms on the two grids agree (discrete Plancherel).
// On these grids both grid phase factors e^{-i x0 xi_k}, e^{-i j dx xi_k}
// reduce to exact sign flips, so the wrapper around the FFT backend is just
// alternating signs plus one real scale; no trigonometric phase is applied.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "dlab/errors.hpp"
#include "dlab/grid.hpp"
#include "dlab/numeric.hpp"

namespace dlab::fourier {

struct TransformPlan {
    double window_halfwidth = 20.0;
    std::size_t n_points = 4096;
    double tolerance = 1e-8;

    TransformPlan() = default;
    TransformPlan(double halfwidth, std::size_t n, double tol = 1e-8)
        : window_halfwidth(halfwidth), n_points(n), tolerance(tol) {
        validate();
    }

    void validate() const {
        if (!(window_halfwidth > 0.0) || !std::isfinite(window_halfwidth))
            throw GridError("fourier", "plan window halfwidth must be positive");
        if (n_points < 2 || !is_pow2(n_points))
            throw GridError("fourier", "plan point count must be a power of two, at least 2");
        if (!(tolerance > 0.0) || !std::isfinite(tolerance))
            throw GridError("fourier", "plan tolerance must be positive");
    }

    double dx() const { return 2.0 * window_halfwidth / static_cast<double>(n_points); }
    double dxi() const { return M_PI / window_halfwidth; }
    double xi_max() const { return M_PI / dx(); }

    Grid1D physical_grid() const { return {-window_halfwidth, dx(), n_points}; }
    Grid1D spectral_grid() const { return {-xi_max(), dxi(), n_points}; }
};

namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW plans are cached per (size, sign). Plans are created once under the
// planner mutex with FFTW_ESTIMATE (no runtime measurement, deterministic)
// and executed with the new-array interface; fftw_alloc keeps the alignment
// the cached plan was created with.
inline void dft(int sign, std::size_t n, const Complex* in, Complex* out) {
    fftw_plan plan;
    {
        std::scoped_lock lock(planner_mutex());
        static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
        auto key = std::make_pair(n, sign);
        auto it = cache.find(key);
        if (it == cache.end()) {
            fftw_complex* a = fftw_alloc_complex(n);
            fftw_complex* b = fftw_alloc_complex(n);
            plan = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign, FFTW_ESTIMATE);
            fftw_free(a);
            fftw_free(b);
            cache.emplace(key, plan);
        } else {
            plan = it->second;
        }
    }
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i][0] = in[i].real();
        a[i][1] = in[i].imag();
    }
    fftw_execute_dft(plan, a, b);
    for (std::size_t i = 0; i < n; ++i) out[i] = Complex(b[i][0], b[i][1]);
    fftw_free(a);
    fftw_free(b);
}

// e^{i pi n/2} for even n: +1 when n/2 is even, -1 when odd.
inline double half_turn_sign(std::size_t n) { return (n / 2) % 2 == 0 ? 1.0 : -1.0; }

}  // namespace detail

inline SampledFunction forward(const SampledFunction& u, const TransformPlan& plan) {
    u.validate("fourier");
    if (u.domain != Domain::Physical)
        throw GridError("fourier", "forward expects a physical-domain input");
    if (!u.grid.compatible(plan.physical_grid()))
        throw GridError("fourier", "input grid does not match the plan grid");

    const std::size_t n = u.size();
    std::vector<Complex> in(n), out(n);
    for (std::size_t j = 0; j < n; ++j) in[j] = (j & 1) ? -u.values[j] : u.values[j];
    detail::dft(FFTW_FORWARD, n, in.data(), out.data());

    const double scale = u.grid.dx / std::sqrt(2.0 * M_PI);
    const double sigma = detail::half_turn_sign(n);
    SampledFunction v;
    v.domain = Domain::Spectral;
    v.grid = plan.spectral_grid();
    v.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = ((k & 1) ? -sigma : sigma) * scale;
        v.values[k] = s * out[k];
    }
    return v;
}

inline SampledFunction inverse(const SampledFunction& v, const TransformPlan& plan) {
    v.validate("fourier");
    if (v.domain != Domain::Spectral)
        throw GridError("fourier", "inverse expects a spectral-domain input");
    if (!v.grid.compatible(plan.spectral_grid()))
        throw GridError("fourier", "input grid does not match the plan spectral grid");

    const std::size_t n = v.size();
    std::vector<Complex> in(n), out(n);
    for (std::size_t k = 0; k < n; ++k) in[k] = (k & 1) ? -v.values[k] : v.values[k];
    detail::dft(FFTW_BACKWARD, n, in.data(), out.data());

    const double scale = v.grid.dx / std::sqrt(2.0 * M_PI);
    const double sigma = detail::half_turn_sign(n);
    SampledFunction u;
    u.domain = Domain::Physical;
    u.grid = plan.physical_grid();
    u.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = ((j & 1) ? -sigma : sigma) * scale;
        u.values[j] = s * out[j];
    }
    return u;
}

struct Interval {
    double a = 0.0;
    double b = 0.0;
};

// Trapezoid L2 norm of weight(x)*f(x) over the region (default: whole grid).
// Region endpoints need not sit on grid points; boundary cells are clipped
// with linear interpolation of f. Accuracy is the trapezoid's O(dx^2) against
// the clipped endpoints, spectral when the integrand dies before the ends.
inline double l2_norm(const SampledFunction& f,
                      const std::function<double(double)>& weight = nullptr,
                      std::optional<Interval> region = std::nullopt) {
    f.validate("fourier");
    const Grid1D& g = f.grid;
    double a = region ? region->a : g.x0;
    double b = region ? region->b : g.back();
    const double slack = 1e-9 * g.dx;
    if (!(a <= b)) throw DomainError("fourier", "norm region is empty or reversed");
    if (a < g.x0 - slack || b > g.back() + slack)
        throw DomainError("fourier", "norm region extends outside the sampled grid");
    a = std::max(a, g.x0);
    b = std::min(b, g.back());

    auto cell_value = [&](std::size_t i) {
        double x = g.point(i);
        double w = weight ? weight(x) : 1.0;
        return w * w * std::norm(f.values[i]);
    };
    auto interp_value = [&](double x) {
        double s = (x - g.x0) / g.dx;
        std::size_t i = static_cast<std::size_t>(std::min(
            std::max(0.0, std::floor(s)), static_cast<double>(g.n - 2)));
        double theta = s - static_cast<double>(i);
        Complex fx = f.values[i] + theta * (f.values[i + 1] - f.values[i]);
        double w = weight ? weight(x) : 1.0;
        return w * w * std::norm(fx);
    };

    double ia = std::ceil((a - g.x0) / g.dx - 1e-12);
    double ib = std::floor((b - g.x0) / g.dx + 1e-12);
    PairwiseAccumulator<double> acc;
    if (ia > ib) {
        // region inside a single cell
        acc.add(0.5 * (interp_value(a) + interp_value(b)) * (b - a));
        return std::sqrt(std::max(0.0, acc.total()));
    }
    auto i0 = static_cast<std::size_t>(ia);
    auto i1 = static_cast<std::size_t>(ib);
    for (std::size_t i = i0; i < i1; ++i)
        acc.add(0.5 * (cell_value(i) + cell_value(i + 1)) * g.dx);
    double xa = g.point(i0);
    if (a < xa - slack) acc.add(0.5 * (interp_value(a) + cell_value(i0)) * (xa - a));
    double xb = g.point(i1);
    if (b > xb + slack) acc.add(0.5 * (cell_value(i1) + interp_value(b)) * (b - xb));
    return std::sqrt(std::max(0.0, acc.total()));
}

// Trapezoid inner product Int u(x) conj(v(x)) dx on a shared grid.
inline Complex inner_product(const SampledFunction& u, const SampledFunction& v) {
    u.validate("fourier");
    v.validate("fourier");
    if (u.domain != v.domain || !u.grid.compatible(v.grid, 1e-12))
        throw GridError("fourier", "inner product requires matching grids");
    PairwiseAccumulator<Complex> acc;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc.add(w * u.grid.dx * u.values[i] * std::conj(v.values[i]));
    }
    return acc.total();
}

inline SampledFunction sample(const std::function<Complex(double)>& f, const Grid1D& grid,
                              Domain domain) {
    SampledFunction s;
    s.domain = domain;
    s.grid = grid;
    s.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        Complex v = f(grid.point(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw EvalError("fourier", "evaluator returned a non-finite value");
        s.values[i] = v;
    }
    return s;
}

// Continuous-in-xi transform of physically sampled data: the same rectangle
// sum the DFT computes, evaluated at an arbitrary frequency. O(n) per call;
// the way tabulated data expose u0^ between (and far below) grid frequencies.
// The linear phase is carried by a rotation recurrence, resynchronized every
// 1024 steps so drift stays near rounding.
inline std::function<Complex(double)> spectral_evaluator(
    std::shared_ptr<const SampledFunction> samples) {
    samples->validate("fourier");
    return [samples](double xi) {
        const Grid1D& g = samples->grid;
        PairwiseAccumulator<Complex> acc;
        Complex z;
        const Complex r = std::polar(1.0, -g.dx * xi);
        for (std::size_t j = 0; j < g.n; ++j) {
            if (j % 1024 == 0) z = std::polar(1.0, -g.point(j) * xi);
            acc.add(samples->values[j] * z);
            z *= r;
        }
        return acc.total() * (g.dx / std::sqrt(2.0 * M_PI));
    };
}

// d/dxi of the above: transform of -i x u(x).
inline std::function<Complex(double)> spectral_derivative_evaluator(
    std::shared_ptr<const SampledFunction> samples) {
    samples->validate("fourier");
    return [samples](double xi) {
        const Grid1D& g = samples->grid;
        PairwiseAccumulator<Complex> acc;
        Complex z;
        const Complex r = std::polar(1.0, -g.dx * xi);
        for (std::size_t j = 0; j < g.n; ++j) {
            if (j % 1024 == 0) z = std::polar(1.0, -g.point(j) * xi);
            double x = g.point(j);
            acc.add(Complex(0.0, -x) * samples->values[j] * z);
            z *= r;
        }
        return acc.total() * (g.dx / std::sqrt(2.0 * M_PI));
    };
}

// Largest |xi| (plus the rightmost index scanned) where |v| stays above
// rel_threshold * max|v|. Zero input reports radius 0.
struct SupportScan {
    double radius = 0.0;
    double peak = 0.0;
};

inline SupportScan scan_support(const SampledFunction& v, double rel_threshold) {
    v.validate("fourier");
    SupportScan out;
    for (const Complex& z : v.values) out.peak = std::max(out.peak, std::abs(z));
    if (out.peak == 0.0) return out;
    const double cut = rel_threshold * out.peak;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v.values[i]) >= cut)
            out.radius = std::max(out.radius, std::abs(v.grid.point(i)));
    return out;
}

}  // namespace dlab::fourier
