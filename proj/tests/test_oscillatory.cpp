#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "dlab/bounds.hpp"
#include "dlab/datum.hpp"
#include "dlab/oscillatory.hpp"
#include "dlab/propagator.hpp"
#include "oracles.hpp"

using dlab::Complex;
using dlab::datum::builtin;
using dlab::oscillatory::parts;
using dlab::oscillatory::reconstruct;

TEST_CASE("parts at the origin of the (t, x) plane recover plain integrals") {
    auto p = parts(builtin("hermite2"), 0.0, 0.0);
    CHECK(std::abs(p.I1) < 1e-9);                          // odd integrand
    CHECK(std::abs(p.I2 - oracle::kSqrt2Pi) < 1e-7);       // int e^{-xi^2/2}
    CHECK(std::abs(p.I3 - oracle::kSqrt2Pi) < 1e-7);       // int (2 - xi^2) e^{-xi^2/2}
    CHECK(p.error_estimate < 1e-8);
    CHECK(p.points >= 256);
    CHECK(dlab::is_pow2(p.points));
}

TEST_CASE("parts at x = 0 match the complex Gaussian closed forms") {
    auto d = builtin("hermite2");
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        auto p = parts(d, t, 0.0);
        Complex b(1.0, t);  // 1 + i t
        Complex g = oracle::kSqrt2Pi / std::sqrt(b);
        Complex expect2 = g;
        Complex expect3 = 2.0 * g - g / b;
        CHECK(std::abs(p.I1) < 1e-8);
        CHECK(std::abs(p.I2 - expect2) < 1e-7);
        CHECK(std::abs(p.I3 - expect3) < 1e-7);
    }
}

TEST_CASE("reconstruction reproduces the exact evolution") {
    auto d = builtin("hermite2");
    for (double t : {1.0, 5.0, 20.0}) {
        for (double x : {0.0, -3.0, 3.0, 10.0}) {
            Complex u = reconstruct(d, t, x);
            Complex exact = d.exact_evolution(t, x);
            CHECK(std::abs(u - exact) <= 1e-5 * (1.0 + std::abs(exact)));
        }
    }
}

TEST_CASE("reconstruction agrees with the numerical propagator") {
    auto d = builtin("hermite2");
    dlab::Grid1D single{2.0, 1.0, 1};
    auto field = dlab::propagator::evolve(d, 5.0, single, {});
    Complex u = reconstruct(d, 5.0, 2.0);
    CHECK(std::abs(u - field.samples.values[0]) <=
          1e-5 * (1.0 + std::abs(field.samples.values[0])));
}

TEST_CASE("part magnitudes respect the lemma constants") {
    auto d = builtin("hermite2");
    auto all = dlab::bounds::theorem_constant(d);
    for (double t : {1.0, 5.0, 20.0}) {
        for (double x : {0.0, -1.0, 3.0, -10.0}) {
            auto p = parts(d, t, x);
            CHECK(std::abs(p.I1) <= all.B1 + 1e-6);
            CHECK(std::abs(p.I2) <= all.B2 + 1e-6);
            CHECK(std::abs(p.I3) <= all.B3 + 1e-6);
        }
    }
}

TEST_CASE("non-compliant data cannot be decomposed") {
    CHECK_THROWS_AS(parts(builtin("gauss"), 1.0, 0.0), dlab::HypothesisError);
    CHECK_THROWS_AS(parts(builtin("odd1"), 1.0, 0.0), dlab::HypothesisError);
    CHECK_THROWS_AS(reconstruct(builtin("gauss"), 1.0, 0.0), dlab::HypothesisError);
}

TEST_CASE("domain guards for time and position") {
    auto d = builtin("hermite2");
    CHECK_THROWS_AS(reconstruct(d, 0.0, 1.0), dlab::DomainError);
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(parts(d, inf, 0.0), dlab::DomainError);
    CHECK_THROWS_AS(parts(d, 1.0, std::nan("")), dlab::DomainError);
}

TEST_CASE("the zero datum decomposes into zero parts") {
    dlab::datum::DatumSpec spec;
    spec.name = "null";
    spec.family = "tabulated";
    for (int i = 0; i < 64; ++i) {
        spec.sample_x.push_back(-8.0 + 0.25 * i);
        spec.sample_v.push_back(Complex(0.0, 0.0));
    }
    auto zero = dlab::datum::load(spec);
    auto p = parts(zero, 3.0, 1.0);
    CHECK(std::abs(p.I1) == 0.0);
    CHECK(std::abs(p.I2) == 0.0);
    CHECK(std::abs(p.I3) == 0.0);
    CHECK(p.points == 0);
}

TEST_CASE("phase derivative identity holds at modest frequencies") {
    std::vector<double> xi = {-2.0, -1.0, -0.3, 0.7, 2.0};
    CHECK(dlab::oscillatory::phase_identity_check(0.0, xi) < 1e-12);
    CHECK(dlab::oscillatory::phase_identity_check(1.0, xi) < 1e-8);
    CHECK(dlab::oscillatory::phase_identity_check(5.0, xi) < 1e-6);
    // the probe degrades as |t xi| grows, which is the point of exposing it
    CHECK(dlab::oscillatory::phase_identity_check(200.0, xi) >
          dlab::oscillatory::phase_identity_check(1.0, xi));
}
