#include <doctest.h>

#include <cmath>
#include <random>

#include "freelevy/catalog.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/transforms.hpp"
#include "oracles.hpp"

using namespace freelevy;
using oracle::cplx;

namespace {

EvalContext path(EvalPath p) {
    EvalContext c;
    c.path = p;
    return c;
}

const EvalContext triplet_path = path(EvalPath::Triplet);
const EvalContext closed_path = path(EvalPath::Closed);

double rel(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

// Cauchy transform of the semicircle with variance a: root of a G^2 - z G + 1 = 0 with Im G < 0.
cplx semicircle_cauchy(double a, cplx z) {
    const cplx d = std::sqrt(z * z - 4.0 * a);
    const cplx g1 = (z + d) / (2.0 * a), g2 = (z - d) / (2.0 * a);
    return g1.imag() < g2.imag() ? g1 : g2;
}

}  // namespace

TEST_CASE("semicircle: phi = a / z on both routes") {
    const MeasureModel m = make("semicircle", {{"a", 2}});
    for (double x : {-3.0, 0.0, 1.5})
        for (double y : {0.01, 1.0, 30.0}) {
            const cplx z(x, y);
            CHECK(rel(phi(m, {x, y}, triplet_path), 2.0 / z) < 1e-14);
            CHECK(rel(phi(m, {x, y}, closed_path), 2.0 / z) < 1e-14);
        }
}

TEST_CASE("free Poisson: triplet route against z / (z - 1)") {
    const MeasureModel m = make("free_poisson");
    for (double x : {-2.0, 0.5, 1.0, 3.0})
        for (double y : {0.05, 1.0, 20.0}) {
            const cplx z(x, y);
            CHECK(rel(phi(m, {x, y}, triplet_path), z / (z - 1.0)) < 1e-12);
        }
}

TEST_CASE("two-atom law: triplet route against the partial fractions") {
    for (double b : {0.5, 1.0, 4.0}) {
        const MeasureModel m = make("two_atom", {{"b", b}});
        for (double x : {-1.0, 0.0, 2.0})
            for (double y : {0.1, 3.0}) {
                const cplx z(x, y);
                const cplx expected = b * (1.0 + 1.0 / (z - 1.0)) - (1.0 - 1.0 / (z + 1.0));
                CHECK(rel(phi(m, {x, y}, triplet_path), expected) < 1e-12);
            }
    }
}

TEST_CASE("Cauchy: phi = -i and b = 1/y") {
    const MeasureModel m = make("cauchy");
    for (double x : {-10.0, 0.0, 0.3})
        for (double y : {1e-4, 0.5, 8.0}) {
            CHECK(rel(phi(m, {x, y}, triplet_path), cplx(0.0, -1.0)) < 1e-8);
            CHECK(b_value(m, x, y, triplet_path) * y == doctest::Approx(1.0).epsilon(1e-9));
        }
}

TEST_CASE("dual route: triplet and closed form agree for every catalog model that has both") {
    for (const char* id : {"cauchy_mixture", "free_meixner", "student3", "sparse", "uniform_levy", "two_atom"}) {
        const MeasureModel m = make(id);
        CAPTURE(id);
        for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5})
            for (double y : {0.05, 1.0, 10.0})
                CHECK(rel(phi(m, {x, y}, triplet_path), phi(m, {x, y}, closed_path)) < 1e-7);
    }
    const MeasureModel fm = make("free_meixner", {{"a", 1}, {"b", 0.5}});
    for (double x : {-2.0, 0.0, 1.0})
        CHECK(rel(phi(fm, {x, 0.3}, triplet_path), phi(fm, {x, 0.3}, closed_path)) < 1e-7);
}

TEST_CASE("inverse transform inverts the free Poisson Cauchy transform") {
    const MeasureModel m = make("free_poisson");
    for (double s : {0.5, 1.0, 3.0})
        for (double x : {-1.0, 0.5, 2.0, 6.0})
            for (double y : {0.2, 1.0, 5.0}) {
                const cplx z(x, y);
                const cplx F = 1.0 / oracle::mp_rate_cauchy(s, z);
                const cplx back = f_inverse(m, s, UpperHalfPoint(F.real(), F.imag()), triplet_path);
                CHECK(std::abs(back - z) < 1e-9 * (1.0 + std::abs(z)));
            }
}

TEST_CASE("inverse transform inverts the semicircle Cauchy transform") {
    const MeasureModel m = make("semicircle", {{"a", 1}});
    for (double s : {0.25, 1.0, 4.0})
        for (double x : {-3.0, 0.0, 1.0})
            for (double y : {0.1, 2.0}) {
                const cplx z(x, y);
                const cplx F = 1.0 / semicircle_cauchy(s, z);
                const cplx back = f_inverse(m, s, UpperHalfPoint(F.real(), F.imag()));
                CHECK(std::abs(back - z) < 1e-12 * (1.0 + std::abs(z)));
            }
}

TEST_CASE("cumulant transform is w phi(1/w)") {
    const MeasureModel m = make("free_poisson");
    const cplx w(0.3, -0.7);
    const cplx expected = w * (1.0 / w) / (1.0 / w - 1.0);
    CHECK(rel(cumulant_transform(m, w), expected) < 1e-12);
    CHECK_THROWS_AS(cumulant_transform(m, cplx(0.3, 0.7)), InvalidParams);
}

TEST_CASE("two-atom cumulant transform with reduced drift 0") {
    const MeasureModel m = make("two_atom", {{"b", 1}});
    for (const cplx w : {cplx(0.2, -0.1), cplx(-0.4, -0.3), cplx(0.05, -0.6)}) {
        const cplx expected = w / (1.0 - w) - w / (1.0 + w);
        CHECK(rel(cumulant_transform(m, w), expected) < 1e-9);
    }
}

TEST_CASE("square root branch") {
    const cplx r1(2.0, -1.0), r2(-1.0, -0.5);
    for (double x : {-50.0, -1.0, 0.0, 0.5, 3.0})
        for (double y : {1e-8, 0.3, 40.0}) {
            const cplx z(x, y), q = sqrt_quadratic(z, r1, r2);
            CHECK(std::abs(q * q - (z - r1) * (z - r2)) < 1e-12 * (1.0 + std::norm(z)));
        }
    const cplx big(0.0, 1e8);
    CHECK(std::abs(sqrt_quadratic(big, r1, r2) / big - 1.0) < 1e-6);
    // Continuity along a horizontal line just above the real axis.
    cplx prev = sqrt_quadratic(cplx(-5.0, 1e-3), 2.0, -2.0);
    for (int k = 1; k <= 2000; ++k) {
        const cplx cur = sqrt_quadratic(cplx(-5.0 + 10.0 * k / 2000, 1e-3), 2.0, -2.0);
        CHECK(std::abs(cur - prev) < 0.2);
        prev = cur;
    }
}

TEST_CASE("property: Pick function, Im phi <= 0") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(-6.0, 6.0), uly(-6.0, 2.0);
    for (const auto& id : catalog_ids()) {
        if (id == "compound_poisson") continue;
        const MeasureModel m = make(id);
        CAPTURE(id);
        for (int k = 0; k < 15; ++k) {
            const double x = ux(rng), y = std::exp(uly(rng));
            CHECK(phi(m, {x, y}).imag() <= 1e-12);
        }
    }
}

TEST_CASE("route selection errors") {
    const MeasureModel stable = make("free_stable_sym");
    CHECK_THROWS_AS(phi(stable, {0.0, 1.0}, closed_path), UnknownReference);
    MeasureModel closed_only = make("cauchy");
    closed_only.triplet.reset();
    CHECK_THROWS_AS(phi(closed_only, {0.0, 1.0}, triplet_path), Unclassifiable);
    CHECK(phi(closed_only, {0.0, 1.0}).imag() == doctest::Approx(-1.0));
    CHECK_THROWS_AS(UpperHalfPoint(0.0, 0.0), InvalidParams);
    CHECK_THROWS_AS(reference_cauchy(stable, {0.0, 1.0}), UnknownReference);
}

TEST_CASE("reference Cauchy transforms match independent oracles") {
    const MeasureModel mp = make("free_poisson");
    for (double x : {-1.0, 1.0, 5.0})
        CHECK(std::abs(reference_cauchy(mp, {x, 0.5}) - oracle::mp_cauchy(cplx(x, 0.5))) < 1e-13);
    const MeasureModel st = make("student3");
    // G of the Student t3 density 2/(pi (1+x^2)^2) by direct quadrature.
    const double x = 0.7, y = 0.9;
    const double re = oracle::simpson([&](double t) {
        const double d = (x - t) * (x - t) + y * y;
        return (x - t) / d * 2.0 / (oracle::pi * (1 + t * t) * (1 + t * t));
    }, -400.0, 400.0, 400000);
    const double im = oracle::simpson([&](double t) {
        const double d = (x - t) * (x - t) + y * y;
        return -y / d * 2.0 / (oracle::pi * (1 + t * t) * (1 + t * t));
    }, -400.0, 400.0, 400000);
    CHECK(std::abs(reference_cauchy(st, {x, y}) - cplx(re, im)) < 1e-8);
}
