// dlab: command-line surface of the dispersive-decay laboratory.
//
// One subcommand per experiment. Artifacts are CSV or JSON; files are
// written whole via a temp-and-rename so failures never leave partial
// output. Errors exit 1 (configuration, numerics) or 2 (hypothesis
// violations) with one stderr record: ERROR <code> <module> <message>.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlab/bounds.hpp"
#include "dlab/datum.hpp"
#include "dlab/decay.hpp"
#include "dlab/errors.hpp"
#include "dlab/fourier.hpp"
#include "dlab/hypotheses.hpp"
#include "dlab/oscillatory.hpp"
#include "dlab/propagator.hpp"

namespace {

struct Options {
    std::string datum;
    std::string spec;
    double radius = 1.0;
    double t = 1.0;
    double t_min = 1.0;
    double t_max = 100.0;
    std::size_t t_steps = 25;
    double x = 0.0;
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t x_steps = 201;
    double window = 20.0;  // plan halfwidth L
    std::size_t points = 4096;
    double tol = 1e-8;
    std::string format;
    std::string out;
    std::string observable = "at_point";
    std::string path = "auto";
    double t_fit_min = 10.0;
};

void add_datum_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--datum", o.datum, "built-in datum name");
    cmd->add_option("--spec", o.spec, "path to a datum spec JSON file");
}

void add_plan_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--window", o.window, "plan window halfwidth L");
    cmd->add_option("--points", o.points, "plan grid points n (power of two)");
    cmd->add_option("--tol", o.tol, "plan tolerance");
}

dlab::datum::InitialDatum resolve_datum(const Options& o) {
    if (o.datum.empty() == o.spec.empty())
        throw dlab::ParseError("cli", "exactly one of --datum or --spec is required");
    if (!o.datum.empty()) return dlab::datum::builtin(o.datum);
    return dlab::datum::load(dlab::datum::spec_from_file(o.spec));
}

dlab::fourier::TransformPlan make_plan(const Options& o) {
    dlab::fourier::TransformPlan plan(o.window, o.points, o.tol);
    plan.validate();
    return plan;
}

void require_format(const Options& o, const char* cmd, const char* needed) {
    if (!o.format.empty() && o.format != needed)
        throw dlab::ParseError("cli", std::string(cmd) + " emits " + needed + " only");
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw dlab::NotFoundError("cli", "cannot open output path " + tmp);
        os << content;
        os.flush();
        if (!os) {
            std::remove(tmp.c_str());
            throw dlab::NotFoundError("cli", "short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw dlab::NotFoundError("cli", "cannot move output into place at " + path);
    }
}

void emit(const Options& o, const std::string& content) {
    if (o.out.empty())
        std::cout << content;
    else
        atomic_write(o.out, content);
}

std::vector<double> linear_ladder(double lo, double hi, std::size_t n) {
    if (n == 0) throw dlab::ParseError("cli", "t-steps must be positive");
    std::vector<double> t;
    if (n == 1) {
        t.push_back(lo);
        return t;
    }
    for (std::size_t i = 0; i < n; ++i)
        t.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return t;
}

std::vector<double> log_ladder(double lo, double hi, std::size_t n) {
    if (n == 0) throw dlab::ParseError("cli", "t-steps must be positive");
    if (!(lo > 0.0)) throw dlab::ParseError("cli", "log-spaced times need t-min > 0");
    std::vector<double> t;
    if (n == 1) {
        t.push_back(lo);
        return t;
    }
    for (std::size_t i = 0; i < n; ++i)
        t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
    return t;
}

dlab::Grid1D x_grid(const Options& o) {
    if (o.x_steps == 0) throw dlab::ParseError("cli", "x-steps must be positive");
    if (o.x_steps == 1) return dlab::Grid1D{o.x_min, 1.0, 1};
    if (!(o.x_max > o.x_min))
        throw dlab::ParseError("cli", "x range needs x-max > x-min");
    double dx = (o.x_max - o.x_min) / static_cast<double>(o.x_steps - 1);
    return dlab::Grid1D{o.x_min, dx, o.x_steps};
}

nlohmann::ordered_json complex_json(dlab::Complex z) {
    nlohmann::ordered_json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

int run_check(const Options& o) {
    require_format(o, "check", "json");
    auto rep = dlab::hypotheses::check(resolve_datum(o), o.radius);
    emit(o, dlab::hypotheses::to_json(rep).dump(2) + "\n");
    return 0;
}

int run_evolve(const Options& o) {
    require_format(o, "evolve", "csv");
    auto d = resolve_datum(o);
    auto field = dlab::propagator::evolve(d, o.t, x_grid(o), make_plan(o));
    std::ostringstream os;
    os << "x,re_u,im_u,abs_u\n";
    const auto& u = field.samples;
    for (std::size_t j = 0; j < u.grid.n; ++j)
        os << dlab::fmt17(u.grid.point(j)) << ',' << dlab::fmt17(u.values[j].real()) << ','
           << dlab::fmt17(u.values[j].imag()) << ',' << dlab::fmt17(std::abs(u.values[j]))
           << '\n';
    emit(o, os.str());
    return 0;
}

int run_parts(const Options& o) {
    require_format(o, "parts", "json");
    auto d = resolve_datum(o);
    auto plan = make_plan(o);
    auto p = dlab::oscillatory::parts(d, o.t, o.x, plan);

    nlohmann::ordered_json j;
    j["t"] = o.t;
    j["x"] = o.x;
    j["I1"] = complex_json(p.I1);
    j["I2"] = complex_json(p.I2);
    j["I3"] = complex_json(p.I3);
    j["error_estimate"] = p.error_estimate;
    j["points"] = p.points;
    if (o.t != 0.0) {
        dlab::Complex rec = dlab::oscillatory::assemble(p, o.t, o.x);
        auto field = dlab::propagator::evolve(d, o.t, dlab::Grid1D{o.x, 1.0, 1}, plan);
        dlab::Complex ev = field.samples.values.front();
        j["reconstruction"] = complex_json(rec);
        j["evolve"] = complex_json(ev);
        j["residual"] = std::abs(rec - ev);
    }
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_bound(const Options& o) {
    require_format(o, "bound", "json");
    auto d = resolve_datum(o);
    auto plan = make_plan(o);
    auto lb = dlab::bounds::theorem_constant(d, o.radius, plan);
    std::cout << dlab::bounds::to_json(lb).dump(2) << "\n";
    if (!o.out.empty()) {
        std::ostringstream os;
        dlab::decay::write_margin_csv(os, d, lb, linear_ladder(o.t_min, o.t_max, o.t_steps),
                                      x_grid(o), plan);
        atomic_write(o.out, os.str());
    }
    return 0;
}

int run_decay(const Options& o) {
    if (!o.format.empty() && o.format != "csv" && o.format != "json")
        throw dlab::ParseError("cli", "decay emits csv or json");
    auto d = resolve_datum(o);
    auto plan = make_plan(o);

    dlab::decay::Observable obs;
    if (o.observable == "at_point")
        obs = dlab::decay::Observable::at_point(o.x);
    else if (o.observable == "weighted_sup")
        obs = dlab::decay::Observable::weighted_sup(o.x_min, o.x_max, o.x_steps);
    else
        throw dlab::ParseError("cli", "observable must be at_point or weighted_sup");

    dlab::decay::Path path;
    if (o.path == "auto")
        path = dlab::decay::Path::Auto;
    else if (o.path == "evolve")
        path = dlab::decay::Path::ForceEvolve;
    else if (o.path == "exact")
        path = dlab::decay::Path::ForceExact;
    else
        throw dlab::ParseError("cli", "path must be auto, evolve, or exact");

    auto tr = dlab::decay::trace(d, log_ladder(o.t_min, o.t_max, o.t_steps), obs, path, plan);
    auto f = dlab::decay::fit(tr, o.t_fit_min);
    nlohmann::ordered_json j;
    j["exponent"] = f.exponent;
    j["log_amplitude"] = f.log_amplitude;
    j["r_squared"] = f.r_squared;
    j["n_points"] = f.n_points;

    if (o.format == "json") {
        emit(o, j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream os;
    dlab::decay::write_trace_csv(os, tr);
    if (o.out.empty()) {
        std::cout << os.str();
    } else {
        atomic_write(o.out, os.str());
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int run_demo() {
    for (const char* name : {"gauss", "hermite2", "odd1"}) {
        auto d = dlab::datum::builtin(name);
        auto rep = dlab::hypotheses::check(d);
        std::cout << name << ": " << (rep.compliant ? "compliant" : "non-compliant");
        if (!rep.compliant) {
            std::cout << " (";
            bool first = true;
            auto flag = [&](const dlab::hypotheses::WeightedNormResult& r, const char* label) {
                if (r.finite()) return;
                if (!first) std::cout << ", ";
                std::cout << label << " divergent";
                first = false;
            };
            flag(rep.x_u0_norm, "x_u0");
            flag(rep.xi2_norm, "xi2_uhat");
            flag(rep.xi1_deriv_norm, "xi1_duhat");
            std::cout << ")";
        }
        if (d.decay_exponent_expected)
            std::cout << "; expected decay t^" << *d.decay_exponent_expected;
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for dispersive decay of the 1d free Schrodinger flow"};
    app.require_subcommand(1);
    Options o;

    auto* check = app.add_subcommand("check", "decide the admission hypotheses for a datum");
    add_datum_flags(check, o);
    check->add_option("--radius", o.radius, "near-origin cutoff R");
    check->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    check->add_option("--out", o.out, "write the report here instead of stdout");

    auto* evolve = app.add_subcommand("evolve", "evolve a datum and emit u(t, x) samples");
    add_datum_flags(evolve, o);
    evolve->add_option("--t", o.t, "evolution time");
    evolve->add_option("--x-min", o.x_min);
    evolve->add_option("--x-max", o.x_max);
    evolve->add_option("--x-steps", o.x_steps);
    add_plan_flags(evolve, o);
    evolve->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    evolve->add_option("--out", o.out, "write the CSV here instead of stdout");

    auto* parts = app.add_subcommand("parts", "oscillatory part integrals at one (t, x)");
    add_datum_flags(parts, o);
    parts->add_option("--t", o.t, "evolution time");
    parts->add_option("--x", o.x, "observation point");
    add_plan_flags(parts, o);
    parts->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    parts->add_option("--out", o.out, "write the report here instead of stdout");

    auto* bound = app.add_subcommand("bound", "lemma constants and bound-audit margins");
    add_datum_flags(bound, o);
    bound->add_option("--radius", o.radius, "near-origin cutoff R");
    bound->add_option("--t-min", o.t_min)->capture_default_str();
    bound->add_option("--t-max", o.t_max)->capture_default_str();
    bound->add_option("--t-steps", o.t_steps, "linear audit times")->capture_default_str();
    bound->add_option("--x-min", o.x_min);
    bound->add_option("--x-max", o.x_max);
    bound->add_option("--x-steps", o.x_steps);
    add_plan_flags(bound, o);
    bound->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    bound->add_option("--out", o.out, "write the margin map CSV here");

    auto* decay = app.add_subcommand("decay", "trace an observable and fit its power law");
    add_datum_flags(decay, o);
    decay->add_option("--t-min", o.t_min)->capture_default_str();
    decay->add_option("--t-max", o.t_max)->capture_default_str();
    decay->add_option("--t-steps", o.t_steps, "log-spaced trace times")->capture_default_str();
    decay->add_option("--observable", o.observable, "at_point or weighted_sup")
        ->capture_default_str();
    decay->add_option("--x", o.x, "observation point for at_point");
    decay->add_option("--x-min", o.x_min, "weighted_sup window edge");
    decay->add_option("--x-max", o.x_max, "weighted_sup window edge");
    decay->add_option("--x-steps", o.x_steps, "weighted_sup window points");
    decay->add_option("--path", o.path, "auto, evolve, or exact")->capture_default_str();
    decay->add_option("--t-fit-min", o.t_fit_min, "smallest time entering the fit")
        ->capture_default_str();
    add_plan_flags(decay, o);
    decay->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    decay->add_option("--out", o.out, "write the trace CSV here instead of stdout");

    auto* demo = app.add_subcommand("demo", "list built-in data with compliance verdicts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "ERROR ParseError cli " << e.what() << "\n";
        return 1;
    }

    // weighted_sup reuses the x-range flags; its default window is finer
    if (app.got_subcommand(decay) && o.observable == "weighted_sup" &&
        decay->count("--x-steps") == 0)
        o.x_steps = 1001;

    try {
        if (app.got_subcommand(check)) return run_check(o);
        if (app.got_subcommand(evolve)) return run_evolve(o);
        if (app.got_subcommand(parts)) return run_parts(o);
        if (app.got_subcommand(bound)) return run_bound(o);
        if (app.got_subcommand(decay)) return run_decay(o);
        if (app.got_subcommand(demo)) return run_demo();
        std::cerr << "ERROR ParseError cli no subcommand selected\n";
        return 1;
    } catch (const dlab::HypothesisError& e) {
        std::cerr << "ERROR " << e.code() << " " << e.module() << " " << e.what() << "\n";
        return 2;
    } catch (const dlab::Error& e) {
        std::cerr << "ERROR " << e.code() << " " << e.module() << " " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR InternalError cli " << e.what() << "\n";
        return 1;
    }
}
