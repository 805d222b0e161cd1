#pragma once

// Decay diagnostics: sample a scalar observable of the evolution along a
// time ladder, fit its power law, and audit the pointwise estimate
//
//   |u(t, x)| <= C (1 + |x|) / |t|
//
// by the worst observed ratio over a (t, x) lattice. Magnitudes come from
// the closed-form evolution when the datum has one (path "exact") or the
// spectral propagator (path "evolve"); traces record which, since the two
// must agree but do not cost the same.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "dlab/bounds.hpp"
#include "dlab/datum.hpp"
#include "dlab/errors.hpp"
#include "dlab/fourier.hpp"
#include "dlab/grid.hpp"
#include "dlab/numeric.hpp"
#include "dlab/propagator.hpp"

namespace dlab::decay {

struct Observable {
    enum class Kind { AtPoint, WeightedSup };
    Kind kind = Kind::AtPoint;
    double x0 = 0.0;           // AtPoint
    double window_lo = -10.0;  // WeightedSup
    double window_hi = 10.0;
    std::size_t window_points = 1001;

    static Observable at_point(double x) {
        Observable o;
        o.kind = Kind::AtPoint;
        o.x0 = x;
        return o;
    }
    static Observable weighted_sup(double lo, double hi, std::size_t points = 1001) {
        Observable o;
        o.kind = Kind::WeightedSup;
        o.window_lo = lo;
        o.window_hi = hi;
        o.window_points = points;
        return o;
    }

    std::string label() const {
        if (kind == Kind::AtPoint) return "at_point(" + fmt17(x0) + ")";
        return "weighted_sup(" + fmt17(window_lo) + "," + fmt17(window_hi) + ")";
    }

    void validate() const {
        if (kind == Kind::AtPoint) {
            if (!std::isfinite(x0)) throw DomainError("decay", "observation point must be finite");
            return;
        }
        if (!(window_lo < window_hi) || !std::isfinite(window_lo) || !std::isfinite(window_hi))
            throw DomainError("decay", "weighted-sup window must be a finite interval");
        if (window_points < 2) throw DomainError("decay", "weighted-sup window needs >= 2 points");
    }
};

enum class Path { Auto, ForceEvolve, ForceExact };

struct DecayTrace {
    std::string datum_name;
    std::string observable;
    std::vector<double> t_values;
    std::vector<double> magnitudes;
    std::string path;  // "exact" or "evolve"
};

struct PowerLawFit {
    double exponent = 0.0;
    double log_amplitude = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

struct BoundAudit {
    double max_ratio = 0.0;
    double worst_t = 0.0;
    double worst_x = 0.0;
    double constant = 0.0;  // the C that was audited
};

namespace detail {

constexpr double kWindowDeficitTol = 1e-8;

inline Grid1D window_grid(const Observable& o) {
    double dx = (o.window_hi - o.window_lo) / static_cast<double>(o.window_points - 1);
    return Grid1D{o.window_lo, dx, o.window_points};
}

inline double observe(const Observable& o, const SampledFunction& u) {
    if (o.kind == Observable::Kind::AtPoint) return std::abs(u.values.front());
    double best = 0.0;
    for (std::size_t j = 0; j < u.grid.n; ++j)
        best = std::max(best, std::abs(u.values[j]) / (1.0 + std::abs(u.grid.point(j))));
    return best;
}

inline void check_times(const std::vector<double>& t) {
    if (t.empty()) throw DomainError("decay", "trace needs at least one time");
    double prev = 0.0;
    for (double s : t) {
        if (!(s > 0.0) || !std::isfinite(s))
            throw DomainError("decay", "trace times must be positive and finite");
        if (s <= prev) throw DomainError("decay", "trace times must increase strictly");
        prev = s;
    }
}

}  // namespace detail

inline DecayTrace trace(const datum::InitialDatum& d, const std::vector<double>& t_values,
                        const Observable& obs, Path path = Path::Auto,
                        const fourier::TransformPlan& plan = {}) {
    obs.validate();
    detail::check_times(t_values);
    plan.validate();

    bool exact = d.exact_evolution != nullptr;
    if (path == Path::ForceEvolve) exact = false;
    if (path == Path::ForceExact && !d.exact_evolution)
        throw UnsupportedError("decay", "datum '" + d.name + "' has no closed-form evolution");

    DecayTrace out;
    out.datum_name = d.name;
    out.observable = obs.label();
    out.t_values = t_values;
    out.path = exact ? "exact" : "evolve";
    out.magnitudes.reserve(t_values.size());

    const Grid1D grid = obs.kind == Observable::Kind::AtPoint
                            ? Grid1D{obs.x0, 1.0, 1}
                            : detail::window_grid(obs);
    for (double t : t_values) {
        if (exact) {
            SampledFunction u;
            u.domain = Domain::Physical;
            u.grid = grid;
            u.values.reserve(grid.n);
            for (std::size_t j = 0; j < grid.n; ++j)
                u.values.push_back(d.exact_evolution(t, grid.point(j)));
            u.validate("decay");
            out.magnitudes.push_back(detail::observe(obs, u));
        } else {
            auto field = propagator::evolve(d, t, grid, plan);
            if (obs.kind == Observable::Kind::WeightedSup) {
                double deficit = propagator::window_mass_deficit(field);
                if (deficit > detail::kWindowDeficitTol)
                    throw TailError("decay",
                                    "window keeps only part of the evolved mass (deficit " +
                                        fmt17(deficit) + "); enlarge the window");
            }
            out.magnitudes.push_back(detail::observe(obs, field.samples));
        }
    }
    return out;
}

inline PowerLawFit fit(const DecayTrace& trace, double t_min_fit = 10.0) {
    std::vector<double> lt, lm;
    bool any_nonzero = false;
    for (std::size_t i = 0; i < trace.t_values.size(); ++i) {
        if (trace.t_values[i] < t_min_fit) continue;
        if (trace.magnitudes[i] > 0.0) {
            any_nonzero = true;
            lt.push_back(std::log(trace.t_values[i]));
            lm.push_back(std::log(trace.magnitudes[i]));
        }
    }
    if (!any_nonzero)
        throw DegenerateTraceError("decay", "all magnitudes vanish; no power law to fit");
    if (lt.size() < 5)
        throw DomainError("decay", "fit needs at least five usable points above t_min");

    const double n = static_cast<double>(lt.size());
    double st = 0.0, sm = 0.0;
    for (double v : lt) st += v;
    for (double v : lm) sm += v;
    const double mt = st / n, mm = sm / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        sxx += (lt[i] - mt) * (lt[i] - mt);
        sxy += (lt[i] - mt) * (lm[i] - mm);
    }
    if (sxx == 0.0) throw DomainError("decay", "fit needs at least two distinct times");

    PowerLawFit f;
    f.exponent = sxy / sxx;
    f.log_amplitude = mm - f.exponent * mt;
    f.n_points = lt.size();

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        double pred = f.log_amplitude + f.exponent * lt[i];
        ss_res += (lm[i] - pred) * (lm[i] - pred);
        ss_tot += (lm[i] - mm) * (lm[i] - mm);
    }
    f.r_squared = ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / ss_tot;
    return f;
}

// worst case of |u| |t| / (C (1 + |x|)) over the lattice; stays <= 1 when
// the estimate holds with the audited constant
inline BoundAudit audit_bound(const datum::InitialDatum& d, const bounds::LemmaBounds& lb,
                              const std::vector<double>& t_values, const Grid1D& x_grid,
                              const fourier::TransformPlan& plan = {}) {
    detail::check_times(t_values);
    propagator::detail::check_x_grid(x_grid);
    plan.validate();

    BoundAudit audit;
    audit.constant = lb.C;
    for (double t : t_values) {
        SampledFunction u;
        if (d.exact_evolution) {
            u.domain = Domain::Physical;
            u.grid = x_grid;
            for (std::size_t j = 0; j < x_grid.n; ++j)
                u.values.push_back(d.exact_evolution(t, x_grid.point(j)));
        } else {
            u = propagator::evolve(d, t, x_grid, plan).samples;
        }
        for (std::size_t j = 0; j < x_grid.n; ++j) {
            double mag = std::abs(u.values[j]);
            double denom = lb.C * (1.0 + std::abs(x_grid.point(j)));
            double ratio;
            if (denom == 0.0)
                ratio = mag == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            else
                ratio = mag * std::abs(t) / denom;
            if (ratio > audit.max_ratio) {
                audit.max_ratio = ratio;
                audit.worst_t = t;
                audit.worst_x = x_grid.point(j);
            }
        }
    }
    return audit;
}

inline void write_trace_csv(std::ostream& os, const DecayTrace& tr) {
    os << "t,magnitude,observable,datum\n";
    for (std::size_t i = 0; i < tr.t_values.size(); ++i)
        os << fmt17(tr.t_values[i]) << ',' << fmt17(tr.magnitudes[i]) << ',' << tr.observable
           << ',' << tr.datum_name << '\n';
}

inline void write_margin_csv(std::ostream& os, const datum::InitialDatum& d,
                             const bounds::LemmaBounds& lb, const std::vector<double>& t_values,
                             const Grid1D& x_grid, const fourier::TransformPlan& plan = {}) {
    detail::check_times(t_values);
    propagator::detail::check_x_grid(x_grid);
    os << "t,x,abs_u,bound,ratio\n";
    for (double t : t_values) {
        SampledFunction u;
        if (d.exact_evolution) {
            u.domain = Domain::Physical;
            u.grid = x_grid;
            for (std::size_t j = 0; j < x_grid.n; ++j)
                u.values.push_back(d.exact_evolution(t, x_grid.point(j)));
        } else {
            u = propagator::evolve(d, t, x_grid, plan).samples;
        }
        for (std::size_t j = 0; j < x_grid.n; ++j) {
            double x = x_grid.point(j);
            double mag = std::abs(u.values[j]);
            double bound = lb.C * (1.0 + std::abs(x)) / std::abs(t);
            double ratio = bound == 0.0 ? (mag == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                        : mag / bound;
            os << fmt17(t) << ',' << fmt17(x) << ',' << fmt17(mag) << ',' << fmt17(bound) << ','
               << fmt17(ratio) << '\n';
        }
    }
}

}  // namespace dlab::decay
