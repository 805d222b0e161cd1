#pragma once

// Constants promised by the three stationary-phase lemmas, assembled from
// weighted norms of the datum. With the near-origin cutoff at R:
//
//   B1 = sqrt(2R) |xi^{-1} u0^|_{<R} + sqrt(2/R) |u0|
//   B2 = sqrt(2R) |xi^{-2} u0^|_{<R} + C2,   C2 = int_{|xi|>=R} |xi^{-2} u0^|
//   B3 = sqrt(2R) |xi^{-1} d u0^|_{<R} + C3, C3 = int_{|xi|>=R} |xi^{-1} d u0^|
//
// and the pointwise estimate takes C = (2 pi)^{-1/2} max(B1, B2 + B3).
//
// The exterior integrals are truncated at the plan's spectral edge Xi. The
// truncated mass is controlled by Cauchy-Schwarz,
//
//   tail(C2) <= sqrt(2 / (3 Xi^3)) |u0^|,   tail(C3) <= sqrt(2 / Xi) |x u0|,
//
// and is reported as a separate uncertainty rather than folded into B2, B3:
// the constants stay directly comparable across plans while the report still
// carries the information needed to widen them defensibly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "json.hpp"

#include "dlab/datum.hpp"
#include "dlab/errors.hpp"
#include "dlab/fourier.hpp"
#include "dlab/hypotheses.hpp"
#include "dlab/numeric.hpp"

namespace dlab::bounds {

struct TailAllowance {
    double C2 = 0.0;
    double C3 = 0.0;
};

struct LemmaBounds {
    double B1 = 0.0;
    double B2 = 0.0;
    double C2 = 0.0;
    double B3 = 0.0;
    double C3 = 0.0;
    double C = 0.0;   // (2 pi)^{-1/2} max(B1, B2 + B3)
    double R = 1.0;
    TailAllowance tail_uncertainty;
    double slope = 0.0;      // (2 pi)^{-1/2} B1, the |x| coefficient
    double intercept = 0.0;  // (2 pi)^{-1/2} (B2 + B3)
};

namespace detail {

inline std::size_t panel_cap(const datum::InitialDatum& d) {
    return d.kind == datum::Kind::Tabulated ? 2048 : 8192;
}

inline double finite_norm(std::function<Complex(double)> f, int p,
                          hypotheses::Region region, double R, std::size_t cap,
                          const char* what) {
    hypotheses::WeightedNormQuery q;
    q.function = std::move(f);
    q.weight_power = p;
    q.region = region;
    q.cutoff = R;
    q.quadrature_cap = cap;
    auto r = hypotheses::weighted_norm(q);
    if (!r.finite())
        throw HypothesisError("bounds", std::string(what) + " is not square-integrable, so "
                                            "the lemma constants do not exist");
    return r.value;
}

// int over |xi| >= R of |xi|^{-p} |f(xi)|, truncated at Xi, by outward
// dyadic panels
inline double exterior_l1(const std::function<Complex(double)>& f, int p, double R,
                          double Xi, std::size_t cap) {
    auto g = [&f, p](double xi) {
        Complex a = f(xi), b = f(-xi);
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) ||
            !std::isfinite(b.real()) || !std::isfinite(b.imag()))
            throw EvalError("bounds", "exterior integrand is not finite");
        return std::pow(xi, -p) * (std::abs(a) + std::abs(b));
    };
    double total = 0.0;
    for (double a = R; a < Xi; a *= 2.0) {
        double b = std::min(2.0 * a, Xi);
        double panel = refine_midpoint(g, a, b, 0.0, 32, cap).value;
        total += panel;
        if (panel <= 1e-16 * std::max(total, 1e-300)) break;
    }
    return total;
}

inline void require_radius(double R) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw DomainError("bounds", "cutoff radius must be positive");
}

}  // namespace detail

inline double lemma1_rhs(const datum::InitialDatum& d, double R = 1.0) {
    detail::require_radius(R);
    const std::size_t cap = detail::panel_cap(d);
    double near = detail::finite_norm(datum::spectral(d), 1, hypotheses::Region::NearOrigin, R,
                                      cap, "xi^{-1} u0^ near the origin");
    double mass = detail::finite_norm(d.u0, 0, hypotheses::Region::FullLine, R, cap, "u0");
    return std::sqrt(2.0 * R) * near + std::sqrt(2.0 / R) * mass;
}

struct Lemma2Result {
    double B2 = 0.0;
    double C2 = 0.0;
};

inline Lemma2Result lemma2_rhs(const datum::InitialDatum& d, double R = 1.0,
                               const fourier::TransformPlan& plan = {}) {
    detail::require_radius(R);
    const std::size_t cap = detail::panel_cap(d);
    auto uhat = datum::spectral(d);
    double near = detail::finite_norm(uhat, 2, hypotheses::Region::NearOrigin, R, cap,
                                      "xi^{-2} u0^ near the origin");
    Lemma2Result r;
    r.C2 = detail::exterior_l1(uhat, 2, R, plan.xi_max(), cap);
    r.B2 = std::sqrt(2.0 * R) * near + r.C2;
    return r;
}

struct Lemma3Result {
    double B3 = 0.0;
    double C3 = 0.0;
};

inline Lemma3Result lemma3_rhs(const datum::InitialDatum& d, double R = 1.0,
                               const fourier::TransformPlan& plan = {}) {
    detail::require_radius(R);
    const std::size_t cap = detail::panel_cap(d);
    auto duhat = datum::spectral_derivative(d);
    double near = detail::finite_norm(duhat, 1, hypotheses::Region::NearOrigin, R, cap,
                                      "xi^{-1} d/dxi u0^ near the origin");
    Lemma3Result r;
    r.C3 = detail::exterior_l1(duhat, 1, R, plan.xi_max(), cap);
    r.B3 = std::sqrt(2.0 * R) * near + r.C3;
    return r;
}

inline LemmaBounds theorem_constant(const datum::InitialDatum& d, double R = 1.0,
                                    const fourier::TransformPlan& plan = {}) {
    detail::require_radius(R);
    plan.validate();
    const std::size_t cap = detail::panel_cap(d);

    LemmaBounds out;
    out.R = R;
    out.B1 = lemma1_rhs(d, R);
    auto l2 = lemma2_rhs(d, R, plan);
    out.B2 = l2.B2;
    out.C2 = l2.C2;
    auto l3 = lemma3_rhs(d, R, plan);
    out.B3 = l3.B3;
    out.C3 = l3.C3;

    auto u0 = d.u0;
    double uhat_mass = detail::finite_norm(datum::spectral(d), 0, hypotheses::Region::FullLine,
                                           R, cap, "u0^");
    double xu0_mass = detail::finite_norm([u0](double x) { return x * u0(x); }, 0,
                                          hypotheses::Region::FullLine, R, cap, "x u0");
    const double Xi = plan.xi_max();
    out.tail_uncertainty.C2 = std::sqrt(2.0 / (3.0 * Xi * Xi * Xi)) * uhat_mass;
    out.tail_uncertainty.C3 = std::sqrt(2.0 / Xi) * xu0_mass;

    const double front = 1.0 / std::sqrt(2.0 * M_PI);
    out.C = front * std::max(out.B1, out.B2 + out.B3);
    out.slope = front * out.B1;
    out.intercept = front * (out.B2 + out.B3);
    return out;
}

inline nlohmann::ordered_json to_json(const LemmaBounds& b) {
    nlohmann::ordered_json j;
    j["B1"] = b.B1;
    j["B2"] = b.B2;
    j["C2"] = b.C2;
    j["B3"] = b.B3;
    j["C3"] = b.C3;
    j["C"] = b.C;
    j["R"] = b.R;
    j["tail_uncertainty"]["C2"] = b.tail_uncertainty.C2;
    j["tail_uncertainty"]["C3"] = b.tail_uncertainty.C3;
    return j;
}

}  // namespace dlab::bounds
