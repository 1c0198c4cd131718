#include "freelevy/catalog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "freelevy/errors.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
const cplx I(0.0, 1.0);

double param(const Params& p, const std::string& key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void allow_only(const std::string& id, const Params& p, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* allowed : keys)
            if (k == allowed) ok = true;
        if (!ok) throw InvalidParams("catalog: " + id + " does not take parameter '" + k + "'");
    }
}

DensityPiece full_line(RealFn f, double beta, double alpha) {
    return DensityPiece{std::move(f), -inf, inf, beta, alpha};
}

MeasureModel semicircle(const Params& p) {
    allow_only("semicircle", p, {"a"});
    const double a = param(p, "a", 1.0);
    if (!(a > 0.0)) throw InvalidParams("catalog: semicircle requires a > 0");
    MeasureModel m;
    m.name = "semicircle";
    FreeTriplet t;
    t.a = a;
    t.levy.symmetric = true;
    m.triplet = t;
    m.closed_phi = [a](cplx z) { return a / z; };
    const double r = 2.0 * std::sqrt(a);
    m.reference_density = [a, r](double x) {
        return std::abs(x) < r ? std::sqrt(4.0 * a - x * x) / (2.0 * pi * a) : 0.0;
    };
    m.reference_cauchy = [a, r](cplx z) { return (z - sqrt_quadratic(z, r, -r)) / (2.0 * a); };
    return m;
}

MeasureModel free_poisson(const Params& p) {
    allow_only("free_poisson", p, {});
    MeasureModel m;
    m.name = "free_poisson";
    FreeTriplet t;
    t.eta = 1.0;
    t.levy.atoms = {{1.0, 1.0}};
    m.triplet = t;
    m.closed_phi = [](cplx z) { return z / (z - 1.0); };
    m.reference_density = [](double x) {
        return x > 0.0 && x < 4.0 ? std::sqrt((4.0 - x) * x) / (2.0 * pi * x) : 0.0;
    };
    m.reference_cauchy = [](cplx z) { return (z - sqrt_quadratic(z, 0.0, 4.0)) / (2.0 * z); };
    return m;
}

MeasureModel compound_poisson(const Params& p) {
    std::vector<LevyAtom> atoms;
    for (int k = 1;; ++k) {
        const auto t = p.find("t" + std::to_string(k));
        const auto w = p.find("w" + std::to_string(k));
        if (t == p.end() && w == p.end()) break;
        if (t == p.end() || w == p.end())
            throw InvalidParams("catalog: compound_poisson needs both t" + std::to_string(k) + " and w" +
                                std::to_string(k));
        if (t->second == 0.0) throw InvalidParams("catalog: compound_poisson jump sizes must be nonzero");
        if (!(w->second > 0.0)) throw InvalidParams("catalog: compound_poisson weights must be positive");
        atoms.push_back({t->second, w->second});
    }
    if (atoms.size() * 2 != p.size())
        throw InvalidParams("catalog: compound_poisson takes parameters t1, w1, t2, w2, ...");
    if (atoms.empty()) throw InvalidParams("catalog: compound_poisson needs at least one jump (t1, w1)");
    MeasureModel m;
    m.name = "compound_poisson";
    FreeTriplet t;
    for (const auto& a : atoms)
        if (std::abs(a.location) <= 1.0) t.eta += a.weight * a.location;
    t.levy.atoms = atoms;
    t.levy.symmetric = check_symmetry(t.levy);
    m.triplet = t;
    m.closed_phi = [atoms](cplx z) {
        cplx r = 0.0;
        for (const auto& a : atoms) r += a.weight * a.location * z / (z - a.location);
        return r;
    };
    return m;
}

MeasureModel two_atom(const Params& p) {
    allow_only("two_atom", p, {"b"});
    const double b = param(p, "b", 1.0);
    if (!(b > 0.0)) throw InvalidParams("catalog: two_atom requires b > 0");
    MeasureModel m;
    m.name = "two_atom";
    FreeTriplet t;
    t.eta = b - 1.0;
    t.levy.atoms = {{-1.0, 1.0}, {1.0, b}};
    t.levy.symmetric = (b == 1.0);
    m.triplet = t;
    m.closed_phi = [b](cplx z) { return b * z / (z - 1.0) - z / (z + 1.0); };
    return m;
}

MeasureModel cauchy(const Params& p) {
    allow_only("cauchy", p, {});
    MeasureModel m;
    m.name = "cauchy";
    FreeTriplet t;
    t.levy.pieces = {full_line([](double x) { return 1.0 / (pi * x * x); }, 2.0, 1.0)};
    t.levy.symmetric = true;
    m.triplet = t;
    m.closed_phi = [](cplx) { return cplx(0.0, -1.0); };
    m.reference_density = [](double x) { return 1.0 / (pi * (1.0 + x * x)); };
    m.reference_cauchy = [](cplx z) { return 1.0 / (z + I); };
    return m;
}

MeasureModel cauchy_mixture(const Params& p) {
    allow_only("cauchy_mixture", p, {"p"});
    const double q = param(p, "p", 0.75);
    if (!(q == 0.0 || (q >= 0.5 && q <= 1.0)))
        throw InvalidParams("catalog: cauchy_mixture is freely infinitely divisible iff p in {0} U [1/2, 1]");
    if (q == 0.0) {
        MeasureModel m = cauchy({});
        m.name = "cauchy_mixture";
        return m;
    }
    MeasureModel m;
    m.name = "cauchy_mixture";
    FreeTriplet t;
    if (q < 1.0) {
        t.levy.pieces = {full_line([q](double x) { return cauchy_mixture_levy_density(q, x); }, 0.0, 1.0)};
    }
    t.levy.symmetric = true;
    m.triplet = t;
    const double g = 2.0 * std::sqrt(q * (1.0 - q));
    const cplx r1(g, -(2.0 * q - 1.0)), r2(-g, -(2.0 * q - 1.0));
    m.closed_phi = [r1, r2](cplx z) { return 0.5 * (-z - I + sqrt_quadratic(z, r1, r2)); };
    m.reference_density = [q](double x) { return (1.0 - q) / (pi * (1.0 + x * x)); };
    m.reference_cauchy = [q](cplx z) { return q / z + (1.0 - q) / (z + I); };
    return m;
}

MeasureModel free_meixner(const Params& p) {
    allow_only("free_meixner", p, {"a", "b"});
    const double a = param(p, "a", 0.0);
    const double b = param(p, "b", 1.0);
    if (!(b >= 0.0)) throw InvalidParams("catalog: free_meixner is freely infinitely divisible iff b >= 0");
    MeasureModel m;
    m.name = "free_meixner";
    FreeTriplet t;
    if (b == 0.0) {
        if (a == 0.0) {
            t.a = 1.0;
        } else {
            t.levy.atoms = {{a, 1.0 / (a * a)}};
            t.eta = std::abs(a) > 1.0 ? -1.0 / a : 0.0;
        }
        m.closed_phi = [a](cplx z) { return 1.0 / (z - a); };
    } else {
        const double rb = 2.0 * std::sqrt(b);
        DensityPiece pc;
        pc.left = a - rb;
        pc.right = a + rb;
        pc.density = [a, b](double x) { return free_meixner_levy_density(a, b, x); };
        pc.zero_exponent = (pc.left < 0.0 && pc.right > 0.0) ? 2.0 : (pc.touches_zero() ? 1.5 : 0.0);
        t.levy.pieces = {pc};
        t.levy.symmetric = (a == 0.0);
        m.closed_phi = [a, b, rb](cplx z) { return (-a + z - sqrt_quadratic(z, a + rb, a - rb)) / (2.0 * b); };
        // Drift fixed by matching the closed form far up the imaginary axis.
        const cplx far(0.0, 1e3);
        t.eta = 0.0;
        const double re0 = phi_triplet(t, far).real();
        t.eta = m.closed_phi(far).real() - re0;
        if (a == 0.0) t.eta = 0.0;
    }
    m.triplet = t;
    const double rr = 2.0 * std::sqrt(1.0 + b);
    m.reference_density = [a, b, rr](double x) {
        if (std::abs(x - a) >= rr) return 0.0;
        return std::sqrt(4.0 * (1.0 + b) - (x - a) * (x - a)) / (2.0 * pi * (b * x * x + a * x + 1.0));
    };
    m.reference_cauchy = [a, b, rr](cplx z) {
        return ((1.0 + 2.0 * b) * z + a - sqrt_quadratic(z, a + rr, a - rr)) / (2.0 * (b * z * z + a * z + 1.0));
    };
    return m;
}

MeasureModel free_stable_sym(const Params& p) {
    allow_only("free_stable_sym", p, {"alpha"});
    const double al = param(p, "alpha", 1.0);
    if (!(al > 0.0 && al < 2.0)) throw InvalidParams("catalog: free_stable_sym requires 0 < alpha < 2");
    MeasureModel m;
    m.name = "free_stable_sym";
    FreeTriplet t;
    const double c = std::sin(al * pi / 2.0);
    t.levy.pieces = {full_line([c, al](double x) { return c / std::pow(std::abs(x), 1.0 + al); }, 1.0 + al, al)};
    t.levy.symmetric = true;
    m.triplet = t;
    return m;
}

MeasureModel student3(const Params& p) {
    allow_only("student3", p, {});
    MeasureModel m;
    m.name = "student3";
    FreeTriplet t;
    t.levy.pieces = {full_line([](double x) { return student3_levy_density(x); }, 2.0, 3.0)};
    t.levy.symmetric = true;
    m.triplet = t;
    m.closed_phi = [](cplx z) { return 0.5 * (-z - 2.0 * I + sqrt_quadratic(z, 0.0, cplx(0.0, -4.0))); };
    m.reference_density = [](double x) {
        const double d = 1.0 + x * x;
        return 2.0 / (pi * d * d);
    };
    m.reference_cauchy = [](cplx z) { return (z + 2.0 * I) / (z * z + 2.0 * I * z - 1.0); };
    return m;
}

MeasureModel sparse(const Params& p) {
    allow_only("sparse", p, {"N"});
    const double nd = param(p, "N", 4.0);
    if (!(nd >= 1.0 && nd <= 8.0) || nd != std::floor(nd))
        throw InvalidParams("catalog: sparse requires an integer N with 1 <= N <= 8");
    const int n = static_cast<int>(nd);
    MeasureModel m;
    m.name = "sparse";
    FreeTriplet t;
    for (int k = 1; k <= n; ++k) t.levy.atoms.push_back({std::ldexp(1.0, k), std::ldexp(1.0, -k * k)});
    m.triplet = t;
    const auto atoms = t.levy.atoms;
    m.closed_phi = [atoms](cplx z) {
        cplx r = 0.0;
        for (const auto& a : atoms) r += a.weight * (a.location * a.location / (z - a.location) + a.location);
        return r;
    };
    return m;
}

MeasureModel uniform_levy(const Params& p) {
    allow_only("uniform_levy", p, {"c"});
    const double c = param(p, "c", 1.0);
    if (!(c > 0.0)) throw InvalidParams("catalog: uniform_levy requires c > 0");
    MeasureModel m;
    m.name = "uniform_levy";
    FreeTriplet t;
    t.levy.pieces = {DensityPiece{[c](double) { return c; }, -1.0, 1.0, 0.0, 1.0}};
    t.levy.symmetric = true;
    m.triplet = t;
    m.closed_phi = [c](cplx z) {
        // c * integral over [-1,1] of t^2/(z-t) dt
        return c * (-2.0 * z - z * z * (std::log(z - 1.0) - std::log(z + 1.0)));
    };
    return m;
}

std::vector<CatalogEntry> build_catalog() {
    return {
        {"semicircle", "a (default 1)", "a > 0", "pure semicircular triplet (0, a, 0); radius 2 sqrt(a)", semicircle},
        {"free_poisson", "none", "none", "standard free Poisson law: Levy measure delta_1, reduced drift 0",
         free_poisson},
        {"compound_poisson", "t1, w1, t2, w2, ...", "t_k != 0, w_k > 0",
         "compound free Poisson law with finite atomic Levy measure, reduced drift 0", compound_poisson},
        {"two_atom", "b (default 1)", "b > 0",
         "Levy measure b delta_1 + delta_-1 with reduced drift 0; shows the threshold 4 M^2 / sigma^2 is sharp",
         two_atom},
        {"cauchy", "none", "none", "standard Cauchy law: Levy measure 1/(pi t^2) dt, drift 0", cauchy},
        {"cauchy_mixture", "p (default 0.75)", "p in {0} U [1/2, 1]",
         "mixture (1-p) Cauchy + p delta_0; free Jurek class iff p in {0} U [(5+sqrt 5)/10, 1]", cauchy_mixture},
        {"free_meixner", "a (default 0), b (default 1)", "b >= 0",
         "free Meixner law fm_{a,b} with closed Voiculescu and Cauchy transforms", free_meixner},
        {"free_stable_sym", "alpha (default 1)", "0 < alpha < 2",
         "symmetric free stable law: Levy measure sin(alpha pi/2) |t|^(-1-alpha) dt, drift 0", free_stable_sym},
        {"student3", "none", "none", "Student t law with 3 degrees of freedom, density 2/(pi (1+x^2)^2)", student3},
        {"sparse", "N (default 4)", "integer 1 <= N <= 8",
         "Levy measure sum_{n<=N} 2^(-n^2) delta_{2^n}; never unimodal", sparse},
        {"uniform_levy", "c (default 1)", "c > 0", "Levy measure c dt on [-1, 1], drift 0", uniform_levy},
    };
}

}  // namespace

double cauchy_mixture_levy_density(double p, double x) {
    const double u = 2.0 * (8.0 * p * p - 8.0 * p + 1.0);
    const double x2 = x * x;
    const double r = std::sqrt(x2 * x2 + u * x2 + 1.0);
    const double w = (u * x2 + 1.0) / (r + x2) + 1.0;
    return (2.0 - u) / ((1.0 + x2 + r) * (std::sqrt(2.0) + std::sqrt(w)) * 2.0 * std::sqrt(2.0) * pi);
}

double free_meixner_levy_density(double a, double b, double x) {
    const double d = 4.0 * b - (x - a) * (x - a);
    if (d <= 0.0 || x == 0.0) return 0.0;
    return std::sqrt(d) / (2.0 * pi * b * x * x);
}

double student3_levy_density(double x) {
    const double ax = std::abs(x);
    const double S = std::sqrt(x * x + 16.0);
    const double w = 16.0 * ax / (S + ax);
    const double sp = S + ax;
    return 128.0 / (sp * sp * (2.0 * std::sqrt(2.0) + std::sqrt(w)) * 2.0 * std::sqrt(2.0) * pi * x * x);
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
}

std::vector<std::string> catalog_ids() {
    std::vector<std::string> ids;
    for (const auto& e : catalog()) ids.push_back(e.id);
    return ids;
}

MeasureModel make(const std::string& id, const Params& params) {
    for (const auto& e : catalog())
        if (e.id == id) return e.build(params);
    std::ostringstream os;
    os << "catalog: unknown family '" << id << "'; available:";
    for (const auto& e : catalog()) os << ' ' << e.id;
    throw UnknownFamily(os.str());
}

}  // namespace freelevy
