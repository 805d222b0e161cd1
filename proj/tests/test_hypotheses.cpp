#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "dlab/datum.hpp"
#include "dlab/fourier.hpp"
#include "dlab/hypotheses.hpp"
#include "oracles.hpp"

using dlab::Complex;
using dlab::hypotheses::HypothesisReport;
using dlab::hypotheses::Region;
using dlab::hypotheses::WeightedNormQuery;
using dlab::hypotheses::WeightedNormResult;
using Status = dlab::hypotheses::WeightedNormResult::Status;

namespace {

WeightedNormQuery near_origin(std::function<Complex(double)> f, int p, double R = 1.0,
                              int levels = 20, double offset = 0.0) {
    WeightedNormQuery q;
    q.function = std::move(f);
    q.weight_power = p;
    q.region = Region::NearOrigin;
    q.cutoff = R;
    q.refinement_levels = levels;
    q.cell_offset = offset;
    return q;
}

}  // namespace

TEST_CASE("finite weighted norms land on the quadrature reference values") {
    auto h2 = dlab::datum::builtin("hermite2");

    auto xi2 = dlab::hypotheses::weighted_norm(near_origin(h2.u0_hat, 2));
    REQUIRE(xi2.status == Status::Finite);
    CHECK(std::abs(xi2.value - oracle::kH2Xi2Norm) < 1e-7);
    CHECK(xi2.warning.empty());

    auto xi1 = dlab::hypotheses::weighted_norm(near_origin(h2.u0_hat, 1));
    REQUIRE(xi1.status == Status::Finite);
    CHECK(std::abs(xi1.value - oracle::kH2Xi1Norm) < 1e-7);

    auto xi1d = dlab::hypotheses::weighted_norm(near_origin(h2.u0_hat_deriv, 1));
    REQUIRE(xi1d.status == Status::Finite);
    CHECK(std::abs(xi1d.value - oracle::kH2Xi1DerivNorm) < 1e-7);

    // weaker weight never exceeds the stronger one on a sub-unit cutoff
    CHECK(xi1.value <= xi2.value);
}

TEST_CASE("full-line norms match closed forms and reject nonzero weights") {
    auto gauss = dlab::datum::builtin("gauss");
    WeightedNormQuery q;
    q.function = [&gauss](double x) { return x * gauss.u0(x); };
    q.weight_power = 0;
    q.region = Region::FullLine;
    auto r = dlab::hypotheses::weighted_norm(q);
    REQUIRE(r.status == Status::Finite);
    CHECK(std::abs(r.value - oracle::kGaussXU0Norm) < 1e-8);

    q.function = gauss.u0;
    auto plain = dlab::hypotheses::weighted_norm(q);
    REQUIRE(plain.status == Status::Finite);
    CHECK(std::abs(plain.value - oracle::kGaussU0Norm) < 1e-8);

    q.weight_power = 1;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);
}

TEST_CASE("divergent data are flagged with the right growth factors") {
    auto gauss = dlab::datum::builtin("gauss");
    auto odd1 = dlab::datum::builtin("odd1");

    // |xi^{-2} e^{-xi^2/2}|^2 ~ xi^{-4}: levels gain 2^{3/2} each
    auto g2 = dlab::hypotheses::weighted_norm(near_origin(gauss.u0_hat, 2));
    REQUIRE(g2.status == Status::Divergent);
    CHECK(std::abs(g2.value - std::pow(2.0, 1.5)) < 0.05);
    CHECK(g2.warning.empty());

    // odd1 misses both near-origin hypotheses at rate sqrt(2)
    auto o2 = dlab::hypotheses::weighted_norm(near_origin(odd1.u0_hat, 2));
    REQUIRE(o2.status == Status::Divergent);
    CHECK(std::abs(o2.value - std::sqrt(2.0)) < 0.05);

    auto o1d = dlab::hypotheses::weighted_norm(near_origin(odd1.u0_hat_deriv, 1));
    REQUIRE(o1d.status == Status::Divergent);
    CHECK(std::abs(o1d.value - std::sqrt(2.0)) < 0.05);

    // gauss still satisfies the derivative hypothesis
    auto g1d = dlab::hypotheses::weighted_norm(near_origin(gauss.u0_hat_deriv, 1));
    REQUIRE(g1d.status == Status::Finite);
    CHECK(std::abs(g1d.value - oracle::kH2Xi2Norm) < 1e-7);
}

TEST_CASE("ambiguous refinement is reported divergent with a warning") {
    // |xi|^{-1.2} integrand: increments grow by 2^0.2, norms by 2^0.1;
    // neither rule fires, so the conservative verdict must carry a note
    auto slow = [](double xi) { return Complex(std::pow(std::abs(xi), 0.4), 0.0); };
    auto r = dlab::hypotheses::weighted_norm(near_origin(slow, 1));
    CHECK(r.status == Status::Divergent);
    CHECK(!r.warning.empty());

    // borderline log divergence: constant increments per level
    auto half = [](double xi) { return Complex(std::sqrt(std::abs(xi)), 0.0); };
    auto rlog = dlab::hypotheses::weighted_norm(near_origin(half, 1));
    CHECK(rlog.status == Status::Divergent);
    CHECK(!rlog.warning.empty());
}

TEST_CASE("weighted norms scale linearly and respect cell offsets") {
    auto h2 = dlab::datum::builtin("hermite2");
    auto base = dlab::hypotheses::weighted_norm(near_origin(h2.u0_hat, 2));
    auto scaled_f = [&h2](double xi) { return 2.5 * h2.u0_hat(xi); };
    auto scaled = dlab::hypotheses::weighted_norm(near_origin(scaled_f, 2));
    REQUIRE(scaled.status == Status::Finite);
    CHECK(std::abs(scaled.value - 2.5 * base.value) < 1e-12 * scaled.value);

    // a shifted midpoint rule carries an O(offset * h) bias, so values move
    // a little; verdicts must not (checked separately for full reports)
    for (double off : {0.25, -0.25, 0.49}) {
        auto shifted = dlab::hypotheses::weighted_norm(near_origin(h2.u0_hat, 2, 1.0, 20, off));
        REQUIRE(shifted.status == Status::Finite);
        CHECK(std::abs(shifted.value - base.value) < 5e-5);
    }
}

TEST_CASE("level samples are monotone and the zero function is finite") {
    auto h2 = dlab::datum::builtin("hermite2");
    auto r = dlab::hypotheses::weighted_norm(near_origin(h2.u0_hat, 2));
    REQUIRE(r.samples_per_level.size() == 20);
    for (std::size_t k = 1; k < r.samples_per_level.size(); ++k)
        CHECK(r.samples_per_level[k] >= r.samples_per_level[k - 1]);

    auto zero = [](double) { return Complex(0.0, 0.0); };
    auto rz = dlab::hypotheses::weighted_norm(near_origin(zero, 2));
    CHECK(rz.status == Status::Finite);
    CHECK(rz.value == 0.0);

    WeightedNormQuery qz;
    qz.function = zero;
    qz.region = Region::FullLine;
    auto rzf = dlab::hypotheses::weighted_norm(qz);
    CHECK(rzf.status == Status::Finite);
    CHECK(rzf.value == 0.0);
}

TEST_CASE("exterior norms integrate outward from the cutoff") {
    // |f|^2 = xi^{-4} outside R=1 integrates (both sides) to 2/3
    auto f = [](double xi) { return Complex(std::pow(std::abs(xi), -2.0), 0.0); };
    WeightedNormQuery q;
    q.function = f;
    q.region = Region::Exterior;
    q.cutoff = 1.0;
    auto r = dlab::hypotheses::weighted_norm(q);
    REQUIRE(r.status == Status::Finite);
    CHECK(std::abs(r.value - std::sqrt(2.0 / 3.0)) < 1e-6);

    // constant tails diverge
    auto one = [](double) { return Complex(1.0, 0.0); };
    q.function = one;
    auto rd = dlab::hypotheses::weighted_norm(q);
    CHECK(rd.status == Status::Divergent);
}

TEST_CASE("malformed queries raise domain errors") {
    auto f = [](double) { return Complex(1.0, 0.0); };
    WeightedNormQuery q;
    q.function = f;

    q.cutoff = 0.0;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);
    q.cutoff = -2.0;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);
    q.cutoff = 1.0;

    q.refinement_levels = 2;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);
    q.refinement_levels = 20;

    q.cell_offset = 0.5;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);
    q.cell_offset = 0.0;

    q.weight_power = -1;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);
    q.weight_power = 0;

    q.function = nullptr;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(q), dlab::DomainError);

    auto bad = [](double xi) {
        return Complex(xi == 0.0 ? 0.0 : std::nan(""), 0.0);
    };
    WeightedNormQuery qb;
    qb.function = bad;
    CHECK_THROWS_AS(dlab::hypotheses::weighted_norm(qb), dlab::EvalError);
}

TEST_CASE("compliance reports separate the three builtin families") {
    auto h2 = dlab::hypotheses::check(dlab::datum::builtin("hermite2"));
    CHECK(h2.compliant);
    CHECK(h2.x_u0_norm.status == Status::Finite);
    CHECK(h2.xi2_norm.status == Status::Finite);
    CHECK(h2.xi1_deriv_norm.status == Status::Finite);
    CHECK(std::abs(h2.x_u0_norm.value - oracle::kH2XU0Norm) < 1e-6);
    CHECK(std::abs(h2.xi2_norm.value - oracle::kH2Xi2Norm) < 1e-6);
    CHECK(std::abs(h2.xi1_deriv_norm.value - oracle::kH2Xi1DerivNorm) < 1e-6);

    auto g = dlab::hypotheses::check(dlab::datum::builtin("gauss"));
    CHECK(!g.compliant);
    CHECK(g.x_u0_norm.status == Status::Finite);
    CHECK(g.xi2_norm.status == Status::Divergent);
    CHECK(g.xi1_deriv_norm.status == Status::Finite);

    auto o = dlab::hypotheses::check(dlab::datum::builtin("odd1"));
    CHECK(!o.compliant);
    CHECK(o.x_u0_norm.status == Status::Finite);
    CHECK(o.xi2_norm.status == Status::Divergent);
    CHECK(o.xi1_deriv_norm.status == Status::Divergent);
}

TEST_CASE("verdicts are stable under a quarter-cell offset") {
    for (const char* name : {"gauss", "hermite2", "odd1"}) {
        auto d = dlab::datum::builtin(name);
        auto a = dlab::hypotheses::check(d, 1.0, 20, 0.0);
        auto b = dlab::hypotheses::check(d, 1.0, 20, 0.25);
        CHECK(a.compliant == b.compliant);
        CHECK((a.xi2_norm.status == Status::Finite) == (b.xi2_norm.status == Status::Finite));
        CHECK((a.xi1_deriv_norm.status == Status::Finite) ==
              (b.xi1_deriv_norm.status == Status::Finite));
        CHECK((a.x_u0_norm.status == Status::Finite) == (b.x_u0_norm.status == Status::Finite));
    }
}

TEST_CASE("tabulated data reach the same verdicts as their closed forms") {
    dlab::fourier::TransformPlan plan;
    auto grid = plan.physical_grid();
    auto gauss = dlab::datum::builtin("gauss");

    dlab::datum::DatumSpec spec;
    spec.name = "gauss-sampled";
    spec.family = "tabulated";
    for (std::size_t j = 0; j < grid.n; ++j) {
        spec.sample_x.push_back(grid.point(j));
        spec.sample_v.push_back(gauss.u0(grid.point(j)));
    }
    auto tab = dlab::datum::load(spec);

    auto rep = dlab::hypotheses::check(tab, 1.0, 12);
    CHECK(!rep.compliant);
    CHECK(rep.xi2_norm.status == Status::Divergent);
    CHECK(std::abs(rep.xi2_norm.value - std::pow(2.0, 1.5)) < 0.1);
    CHECK(rep.xi1_deriv_norm.status == Status::Finite);
    CHECK(std::abs(rep.xi1_deriv_norm.value - oracle::kH2Xi2Norm) < 1e-4);
    CHECK(rep.x_u0_norm.status == Status::Finite);
    CHECK(std::abs(rep.x_u0_norm.value - oracle::kGaussXU0Norm) < 1e-4);
}

TEST_CASE("analytic spectral derivatives agree with the transform route") {
    dlab::fourier::TransformPlan plan;
    auto grid = plan.physical_grid();
    auto h2 = dlab::datum::builtin("hermite2");

    dlab::datum::DatumSpec spec;
    spec.name = "hermite2-sampled";
    spec.family = "tabulated";
    for (std::size_t j = 0; j < grid.n; ++j) {
        spec.sample_x.push_back(grid.point(j));
        spec.sample_v.push_back(h2.u0(grid.point(j)));
    }
    auto tab = dlab::datum::load(spec);
    auto numeric = dlab::datum::spectral_derivative(tab);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < 64; ++i) {
        double xi = -1.0 + (i + 0.5) * (2.0 / 64.0);
        Complex a = h2.u0_hat_deriv(xi);
        Complex b = numeric(xi);
        num += std::norm(a - b);
        den += std::norm(a);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("reports serialize with stable field names") {
    auto rep = dlab::hypotheses::check(dlab::datum::builtin("gauss"));
    auto j = dlab::hypotheses::to_json(rep);
    CHECK(j["compliant"] == false);
    CHECK(j["R"] == 1.0);
    CHECK(j["norms"]["x_u0"]["status"] == "finite");
    CHECK(j["norms"]["xi2_uhat"]["status"] == "divergent");
    CHECK(j["norms"]["xi1_duhat"]["status"] == "finite");
    CHECK(j["norms"]["xi2_uhat"]["value"].get<double>() > 1.2);
    CHECK(j["norms"]["x_u0"]["value"].get<double>() ==
          doctest::Approx(oracle::kGaussXU0Norm).epsilon(1e-6));
}
