#include <doctest.h>

#include <sstream>
#include <string>

#include "freelevy/catalog.hpp"
#include "freelevy/serialize.hpp"

using namespace freelevy;

TEST_CASE("extended reals") {
    CHECK(to_json(ExtendedReal::infinity()) == json("inf"));
    CHECK(to_json(ExtendedReal(2.5)) == json(2.5));
    CHECK(ExtendedReal::infinity().to_string() == "inf");
}

TEST_CASE("atom and classification records") {
    CHECK(to_json(AtomRecord{}) == json{{"present", false}});
    const json a = to_json(AtomRecord{true, 0.0, 0.5});
    CHECK(a["mass"] == 0.5);
    Classification c;
    c.tag = ClassTag::AtomPlusAC;
    c.s_nu_mass = 0.5;
    CHECK(to_json(c)["tag"] == "AtomPlusAC");
}

TEST_CASE("curve CSV is deterministic and round-trips doubles") {
    const MeasureModel m = make("semicircle");
    const Problem p = make_problem(m, 1.0);
    const DensityCurve c = density_curve(p, Window::autodetect(), 64);
    const std::string a = curve_csv(c), b = curve_csv(density_curve(p, Window::autodetect(), 64));
    CHECK(a == b);
    std::istringstream is(a);
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,v,psi,f");
    std::size_t rows = 0;
    const auto smp = c.samples();
    while (std::getline(is, line)) {
        double x, v, psi, f;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &v, &psi, &f) == 4);
        CHECK(x == smp[rows].x);
        CHECK(f == smp[rows].f);
        ++rows;
    }
    CHECK(rows == smp.size());
}

TEST_CASE("theta scan CSV") {
    ThetaScan t;
    t.R = 1.0;
    t.thetas = {0.5, 1.0};
    t.values = {2.0, 3.0};
    CHECK(theta_csv(t) == "theta,value\n0.5,2\n1,3\n");
}

TEST_CASE("validation report") {
    const json j = to_json(validate(make("two_atom")));
    CHECK(j.contains("checks"));
    CHECK(j["checks"].is_array());
}
