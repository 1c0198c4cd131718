#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "freelevy/catalog.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/measure_model.hpp"
#include "freelevy/spec_loader.hpp"
#include "freelevy/transforms.hpp"

using namespace freelevy;

TEST_CASE("atoms, drift and semicircular part") {
    const MeasureModel m =
        load_spec(R"({"eta": 0.5, "a": 2, "levy": [{"type": "atom", "t": 1, "w": 0.25}, {"type": "atom", "t": -3, "w": 1}]})");
    REQUIRE(m.triplet);
    CHECK(m.triplet->eta == 0.5);
    CHECK(m.triplet->a == 2.0);
    CHECK(m.triplet->levy.atoms.size() == 2);
    CHECK_FALSE(m.triplet->levy.symmetric);
    CHECK_FALSE(m.has_closed_phi());
}

TEST_CASE("power components") {
    const MeasureModel m = load_spec(R"({"levy": [{"type": "power", "c": 2, "alpha": 0.5, "side": "pos"},
                                                  {"type": "power", "c": 2, "alpha": 0.5, "side": "neg"}]})");
    const LevyMeasure& nu = m.triplet->levy;
    CHECK(nu.symmetric);
    CHECK(nu.density(4.0) == doctest::Approx(2.0 / 8.0));
    CHECK(nu.density(-4.0) == doctest::Approx(2.0 / 8.0));
    CHECK(total_mass(nu).is_infinite());
    CHECK(validate(m).passed());
}

TEST_CASE("family components and closed form") {
    const MeasureModel m = load_spec(
        R"({"levy": [{"type": "family", "name": "two_atom", "params": {"b": 1}}], "eta": 0,
            "closed_form": {"name": "two_atom", "params": {"b": 1}}})");
    CHECK(m.triplet->levy.symmetric);
    CHECK(m.has_closed_phi());
    CHECK(validate(m).passed());
}

TEST_CASE("closed form alone gives a model without a triplet") {
    const MeasureModel m = load_spec(R"({"closed_form": {"name": "cauchy", "params": {}}})");
    CHECK_FALSE(m.has_triplet());
    CHECK(phi(m, {0.0, 1.0}).imag() == doctest::Approx(-1.0));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(load_spec("{"), SpecError);
    CHECK_THROWS_AS(load_spec("[]"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"extra": 1})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"a": -1})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": {}})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "atom", "t": 0, "w": 1}]})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "atom", "t": 1, "w": 0}]})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "atom", "t": "x", "w": 1}]})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "power", "c": 1, "alpha": 2, "side": "pos"}]})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "power", "c": 1, "alpha": 1, "side": "up"}]})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "blob"}]})"), SpecError);
    CHECK_THROWS_AS(load_spec(R"({"levy": [{"type": "family", "name": "nope", "params": {}}]})"), UnknownFamily);
    CHECK_THROWS_AS(load_spec(R"({"closed_form": {"name": "free_stable_sym", "params": {}}})"), SpecError);
    CHECK_THROWS_AS(load_spec_file("/nonexistent/spec.json"), SpecError);
}

TEST_CASE("loading from a file") {
    const std::string path = "test_spec_loader_tmp.json";
    {
        std::ofstream f(path);
        f << R"({"levy": [{"type": "atom", "t": 1, "w": 1}], "eta": 1})";
    }
    const MeasureModel m = load_spec_file(path);
    std::remove(path.c_str());
    const MeasureModel fp = make("free_poisson");
    for (double x : {-1.0, 0.5, 2.0}) CHECK(std::abs(phi(m, {x, 0.3}) - phi(fp, {x, 0.3})) < 1e-12);
}
