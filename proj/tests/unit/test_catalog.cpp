#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "freelevy/catalog.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/quadrature.hpp"
#include "freelevy/transforms.hpp"
#include "oracles.hpp"

using namespace freelevy;

TEST_CASE("registry") {
    const auto ids = catalog_ids();
    for (const char* id : {"semicircle", "free_poisson", "compound_poisson", "two_atom", "cauchy", "cauchy_mixture",
                           "free_meixner", "free_stable_sym", "student3", "sparse", "uniform_levy"})
        CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
    for (const auto& e : catalog()) {
        CHECK_FALSE(e.parameters.empty());
        CHECK_FALSE(e.provenance.empty());
    }
}

TEST_CASE("unknown ids and invalid parameters") {
    try {
        make("no_such_law");
        FAIL("expected UnknownFamily");
    } catch (const UnknownFamily& e) {
        CHECK(std::string(e.what()).find("semicircle") != std::string::npos);
    }
    CHECK_THROWS_AS(make("two_atom", {{"b", -1}}), InvalidParams);
    CHECK_THROWS_AS(make("two_atom", {{"c", 1}}), InvalidParams);
    CHECK_THROWS_AS(make("cauchy_mixture", {{"p", 0.3}}), InvalidParams);
    CHECK_THROWS_AS(make("free_meixner", {{"b", -0.5}}), InvalidParams);
    CHECK_THROWS_AS(make("free_stable_sym", {{"alpha", 2}}), InvalidParams);
    CHECK_THROWS_AS(make("sparse", {{"N", 2.5}}), InvalidParams);
    CHECK_THROWS_AS(make("compound_poisson", {{"t1", 1}}), InvalidParams);
    CHECK_THROWS_AS(make("compound_poisson", {{"t1", 0}, {"w1", 1}}), InvalidParams);
    CHECK_THROWS_AS(make("semicircle", {{"a", 0}}), InvalidParams);
}

TEST_CASE("reference densities are normalized") {
    auto mass = [](const MeasureModel& m, double lo, double hi) {
        return integrate_interval(m.reference_density, lo, hi, 1e-12);
    };
    CHECK(mass(make("semicircle", {{"a", 2}}), -2.0 * std::sqrt(2.0), 2.0 * std::sqrt(2.0)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    const MeasureModel st = make("student3");
    CHECK(mass(st, -1e4, 1e4) == doctest::Approx(1.0).epsilon(1e-9));
    const MeasureModel fm = make("free_meixner", {{"a", 1}, {"b", 1}});
    CHECK(mass(fm, 1.0 - 2.0 * std::sqrt(2.0), 1.0 + 2.0 * std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-9));
    // c_p = p delta_0 + (1 - p) Cauchy
    const MeasureModel cp = make("cauchy_mixture", {{"p", 0.8}});
    CHECK(cp.reference_density(0.0) == doctest::Approx(0.2 / oracle::pi));
}

TEST_CASE("free Meixner Levy density") {
    for (double a : {0.0, 0.7})
        for (double b : {0.5, 2.0})
            for (double t : {-0.9, 0.3, 1.1}) {
                const double d2 = 4.0 * b - (t - a) * (t - a);
                const double ref = d2 > 0.0 ? std::sqrt(d2) / (2.0 * oracle::pi * b * t * t) : 0.0;
                CHECK(free_meixner_levy_density(a, b, t) == doctest::Approx(ref).epsilon(1e-12));
            }
}

TEST_CASE("Levy densities of the Cauchy mixture and Student t3") {
    for (double t : {0.01, 0.5, 3.0, 100.0}) {
        CHECK(cauchy_mixture_levy_density(0.8, t) == doctest::Approx(cauchy_mixture_levy_density(0.8, -t)));
        CHECK(cauchy_mixture_levy_density(0.8, t) > 0.0);
        CHECK(student3_levy_density(t) == doctest::Approx(student3_levy_density(-t)));
        CHECK(student3_levy_density(t) > student3_levy_density(2.0 * t));
    }
}

TEST_CASE("degenerate parameters") {
    const MeasureModel delta = make("cauchy_mixture", {{"p", 1}});
    CHECK(delta.triplet->is_point_mass());
    const MeasureModel c0 = make("cauchy_mixture", {{"p", 0}});
    CHECK(c0.triplet->levy.pieces.size() == 1);
    const MeasureModel sc = make("free_meixner", {{"a", 0}, {"b", 0}});
    CHECK(sc.triplet->a == 1.0);
}

TEST_CASE("free stable with alpha = 1 is a Cauchy law of scale pi") {
    const MeasureModel m = make("free_stable_sym", {{"alpha", 1}});
    for (double y : {0.1, 1.0, 7.0}) CHECK(b_value(m, 0.4, y) * y == doctest::Approx(oracle::pi).epsilon(1e-8));
}

TEST_CASE("compound Poisson closed form") {
    const MeasureModel m = make("compound_poisson", {{"t1", 2}, {"w1", 0.5}, {"t2", -0.5}, {"w2", 1}});
    EvalContext tri, cl;
    tri.path = EvalPath::Triplet;
    cl.path = EvalPath::Closed;
    for (double x : {-1.0, 0.0, 2.5}) {
        const cplx a = phi(m, {x, 0.4}, tri), b = phi(m, {x, 0.4}, cl);
        CHECK(std::abs(a - b) < 1e-12);
    }
}
