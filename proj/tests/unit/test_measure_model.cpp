#include <doctest.h>

#include <cmath>
#include <limits>

#include "freelevy/catalog.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/measure_model.hpp"

using namespace freelevy;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool check_named(const ValidationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return c.passed;
    FAIL("missing check " << name);
    return false;
}

}  // namespace

TEST_CASE("total mass and second moment") {
    const FreeTriplet t = *make("two_atom", {{"b", 3}}).triplet;
    CHECK(total_mass(t.levy).value() == doctest::Approx(4.0));
    CHECK(second_moment(t.levy, t.a).value() == doctest::Approx(4.0));
    const FreeTriplet sc = *make("semicircle", {{"a", 2.5}}).triplet;
    CHECK(second_moment(sc.levy, sc.a).value() == doctest::Approx(2.5));
    CHECK(total_mass(make("cauchy").triplet->levy).is_infinite());
    CHECK(second_moment(make("cauchy").triplet->levy, 0.0).is_infinite());
}

TEST_CASE("support radius") {
    CHECK(support_radius(make("two_atom").triplet->levy).value() == 1.0);
    CHECK(support_radius(make("sparse").triplet->levy).value() == 16.0);
    CHECK(support_radius(make("free_meixner", {{"a", 1}, {"b", 1}}).triplet->levy).value() == doctest::Approx(3.0));
    CHECK(support_radius(make("cauchy").triplet->levy).is_infinite());
    CHECK(support_radius(LevyMeasure{}).value() == 0.0);
}

TEST_CASE("symmetry detection") {
    CHECK(check_symmetry(make("two_atom", {{"b", 1}}).triplet->levy));
    CHECK_FALSE(check_symmetry(make("two_atom", {{"b", 2}}).triplet->levy));
    CHECK(check_symmetry(make("free_meixner", {{"a", 0}, {"b", 2}}).triplet->levy));
    CHECK_FALSE(check_symmetry(make("free_meixner", {{"a", 0.5}, {"b", 2}}).triplet->levy));
    CHECK(check_symmetry(make("cauchy_mixture", {{"p", 0.8}}).triplet->levy));
}

TEST_CASE("shift constant removes the compensator of small jumps") {
    FreeTriplet t = *make("two_atom", {{"b", 2}}).triplet;
    // eta = b - 1 and the compensator over |t| <= 1 is -1 + b.
    CHECK(shift_constant(t) == doctest::Approx(0.0).epsilon(1e-14));
    t.eta = 0.25;
    CHECK(shift_constant(t) == doctest::Approx(0.25 - 1.0));
    FreeTriplet stable = *make("cauchy").triplet;
    stable.levy.symmetric = false;
    CHECK_THROWS_AS(shift_constant(stable), DivergentCompensator);
}

TEST_CASE("merge and scaling") {
    const LevyMeasure a = make("two_atom").triplet->levy;
    const LevyMeasure b = make("uniform_levy").triplet->levy;
    const LevyMeasure m = merge(a, b);
    CHECK(m.atoms.size() == 2);
    CHECK(m.pieces.size() == 1);
    CHECK(total_mass(m).value() == doctest::Approx(4.0));
    const FreeTriplet s = scale_triplet(*make("free_meixner", {{"a", 0.5}, {"b", 1}}).triplet, 3.0);
    CHECK(s.levy.density(0.7) == doctest::Approx(3.0 * free_meixner_levy_density(0.5, 1.0, 0.7)));
}

TEST_CASE("validation accepts every catalog model") {
    for (const auto& id : catalog_ids()) {
        if (id == "compound_poisson") continue;
        CAPTURE(id);
        CHECK(validate(make(id)).passed());
    }
    CHECK(validate(make("compound_poisson", {{"t1", 2}, {"w1", 0.5}})).passed());
}

TEST_CASE("validation rejects inadmissible triplets") {
    MeasureModel m;
    m.name = "bad";
    FreeTriplet t;
    t.levy.atoms = {{0.0, 1.0}};
    m.triplet = t;
    CHECK_FALSE(check_named(validate(m), "atom locations nonzero"));

    FreeTriplet u;
    u.levy.pieces.push_back({[](double x) { return std::pow(std::abs(x), -3.5); }, -1.0, 1.0, 3.5, 1.0});
    m.triplet = u;
    CHECK_FALSE(check_named(validate(m), "density pieces well formed"));

    FreeTriplet w;
    w.levy.pieces.push_back({[](double) { return -1.0; }, 1.0, 2.0, 0.0, 1.0});
    m.triplet = w;
    CHECK_FALSE(check_named(validate(m), "densities nonnegative and finite"));

    FreeTriplet p;
    p.levy.pieces.push_back({[](double x) { return 1.0 / std::abs(x); }, 1.0, inf, 0.0, 0.0});
    m.triplet = p;
    CHECK_FALSE(validate(m).passed());
}

TEST_CASE("point mass is flagged") {
    MeasureModel m;
    m.name = "delta";
    m.triplet = FreeTriplet{2.0, 0.0, {}};
    const ValidationReport r = validate(m);
    CHECK(r.point_mass);
}

TEST_CASE("mismatched closed form is caught") {
    MeasureModel m = make("two_atom", {{"b", 1}});
    m.closed_phi = [](cplx z) { return 1.0 / z; };
    CHECK_FALSE(check_named(validate(m), "triplet and closed-form phi agree"));
}
