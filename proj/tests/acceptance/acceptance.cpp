// Acceptance run: one line per criterion, nonzero exit when any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "freelevy/analysis.hpp"
#include "freelevy/catalog.hpp"
#include "freelevy/curve_integration.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/inversion.hpp"
#include "oracles.hpp"

using namespace freelevy;
using oracle::cplx;
using oracle::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Every curve computed here, for the tail-bound criterion.
std::vector<DensityCurve>& all_curves() {
    static std::vector<DensityCurve> v;
    return v;
}

DensityCurve curve(const Problem& p, const Window& w, int n = 512) {
    all_curves().push_back(density_curve(p, w, n));
    return all_curves().back();
}

double sup_error(const DensityCurve& c, const std::function<double(double)>& ref, double lo, double hi) {
    double e = 0.0;
    for (const auto& s : c.samples())
        if (s.psi >= lo && s.psi <= hi) e = std::max(e, std::abs(s.f - ref(s.psi)));
    return e;
}

double total_mass(const Problem& p, const Window& w) {
    const AtomRecord a = detect_atom(p);
    return curve_mass(curve(p, w)) + (a.present ? a.mass : 0.0);
}

double student3_density(double u) { return 2.0 / (pi * (1.0 + u * u) * (1.0 + u * u)); }

double free_meixner_density(double a, double b, double u) {
    const double d = 4.0 * (1.0 + b) - (u - a) * (u - a);
    return d > 0.0 ? std::sqrt(d) / (2.0 * pi * (b * u * u + a * u + 1.0)) : 0.0;
}

// phi of the Cauchy mixture with the square root factorised over its two lower-half-plane roots.
cplx cauchy_mixture_phi(double p, cplx z) {
    const double q = 2.0 * p - 1.0;
    const double re = 2.0 * std::sqrt(p * (1.0 - p));
    const cplx r1(re, -q), r2(-re, -q);
    return 0.5 * (-z - cplx(0, 1) + std::sqrt(z - r1) * std::sqrt(z - r2));
}

// 1 on |x - 1| <= 1/4, cosine taper to 0 at |x - 1| = 1/2.
double taper_bump(double x) {
    const double u = std::abs(x - 1.0);
    if (u <= 0.25) return 1.0;
    if (u >= 0.5) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (u - 0.25) / 0.25));
}

Window mixture_window(double s) { return Window::fixed(-40.0 * std::max(1.0, s), 40.0 * std::max(1.0, s)); }

Outcome c1_semicircle() {
    Outcome o;
    const MeasureModel m = make("semicircle", {{"a", 1}});
    const Problem p = make_problem(m, 1.0);
    const DensityCurve c = curve(p, Window::autodetect(), 1001);
    const double e = sup_error(c, [](double u) { return oracle::semicircle_density(1.0, u); }, -1e9, 1e9);
    o.require(e <= 1e-8, "sup error " + num(e));
    const double mass = curve_mass(c);
    o.require(std::abs(mass - 1.0) <= 1e-8, "mass " + num(mass - 1.0));
    return o;
}

Outcome c2_marchenko_pastur() {
    Outcome o;
    const MeasureModel m = make("free_poisson");
    const Problem p = make_problem(m, 1.0);
    const double e = sup_error(curve(p, Window::autodetect()), oracle::mp_density, 0.1, 3.9);
    o.require(e <= 1e-6, "sup error " + num(e));
    return o;
}

Outcome c3_cauchy() {
    Outcome o;
    const MeasureModel m = make("cauchy");
    for (double s : {0.5, 1.0, 2.0}) {
        const Problem p = make_problem(m, s);
        const double e =
            sup_error(curve(p, Window::fixed(-20, 20)), [s](double u) { return oracle::cauchy_density(s, u); }, -1e9, 1e9);
        o.require(e <= 1e-6, "s=" + num(s) + " sup error " + num(e));
    }
    return o;
}

double interior_sup(const MeasureModel& m, const Window& w, double scale, const std::function<double(double)>& ref) {
    const Problem p = make_problem(m, 1.0, {}, scale);
    double e = 0.0;
    for (const auto& c : x_components(p, resolve_window(p, w)))
        for (int k = 1; k <= 401; ++k) {
            const PointEval pe = evaluate_point(p, c.lo + (c.hi - c.lo) * k / 402.0);
            e = std::max(e, std::abs(pe.f - ref(pe.psi)));
        }
    return e;
}

Outcome c4_catalog() {
    Outcome o;
    const double es = interior_sup(make("student3"), Window::fixed(-30, 30), 1.0, student3_density);
    o.require(es <= 1e-5, "student3 " + num(es));
    for (double a : {0.0, 1.0}) {
        const double e = interior_sup(make("free_meixner", {{"a", a}, {"b", 1}}), Window::autodetect(), 0.0,
                                      [a](double u) { return free_meixner_density(a, 1.0, u); });
        o.require(e <= 1e-5, "free_meixner a=" + num(a) + " " + num(e));
    }
    return o;
}

Outcome c5_atom() {
    Outcome o;
    const MeasureModel m = make("free_poisson");
    for (double s : {0.25, 0.5, 0.75}) {
        const Problem p = make_problem(m, s);
        const AtomRecord a = detect_atom(p);
        o.require(a.present && std::abs(a.location) <= 1e-10, "s=" + num(s) + " location");
        o.require(std::abs(a.mass - (1.0 - s)) <= 1e-10, "s=" + num(s) + " mass " + num(a.mass));
        EvalContext closed;
        closed.path = EvalPath::Closed;
        const Problem pc = make_problem(m, s, closed);
        const AtomRecord t = detect_atom_triplet(p), l = detect_atom_limit(pc);
        o.require(l.present && std::abs(l.mass - t.mass) <= 1e-6, "s=" + num(s) + " limit path");
    }
    o.require(!detect_atom(make_problem(m, 1.25)).present, "atom at s=1.25");
    return o;
}

Outcome c6_classification() {
    Outcome o;
    auto tag = [](const MeasureModel& m, double s) { return classify(make_problem(m, s)).tag; };
    const MeasureModel two = make("two_atom", {{"b", 1}}), mp = make("free_poisson"), sc = make("semicircle");
    o.require(tag(two, 1.0) == ClassTag::ContinuousDensityOnR, "two_atom s=1");
    o.require(tag(mp, 1.0) == ClassTag::AbsolutelyContinuousOnly, "free_poisson s=1");
    o.require(tag(mp, 0.5) == ClassTag::AtomPlusAC, "free_poisson s=0.5");
    for (double s : {0.01, 0.5, 1.0, 7.0, 100.0})
        o.require(tag(sc, s) == ClassTag::ContinuousDensityOnR, "semicircle s=" + num(s));
    return o;
}

Outcome c7_jurek() {
    Outcome o;
    o.require(class_membership(make("cauchy_mixture", {{"p", 0.73}}).triplet->levy).jurek, "p=0.73");
    o.require(!class_membership(make("cauchy_mixture", {{"p", 0.70}}).triplet->levy).jurek, "p=0.70");
    const MeasureModel m = make("cauchy_mixture", {{"p", 0.75}});
    EvalContext tri;
    tri.path = EvalPath::Triplet;
    double worst = 0.0;
    for (double x : {-3.0, -0.5, 0.0, 0.7, 3.0})
        for (double y : {0.05, 0.5, 2.0, 20.0}) {
            const cplx a = phi(m, UpperHalfPoint(x, y), tri), b = cauchy_mixture_phi(0.75, {x, y});
            worst = std::max(worst, std::abs(a - b));
        }
    o.require(worst <= 1e-6, "triplet vs closed phi " + num(worst));
    return o;
}

Outcome c8_symmetric_jurek() {
    Outcome o;
    const double times[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    for (double b : {0.5, 1.0, 2.0}) {
        const MeasureModel m = make("free_meixner", {{"a", 0}, {"b", b}});
        for (double s : times)
            o.require(is_unimodal(make_problem(m, s), Window::autodetect()).unimodal, "fm b=" + num(b) + " s=" + num(s));
    }
    for (double q : {0.75, 0.9}) {
        const MeasureModel m = make("cauchy_mixture", {{"p", q}});
        for (double s : times)
            o.require(is_unimodal(make_problem(m, s, {}, 1.0), mixture_window(s)).unimodal,
                      "c_p p=" + num(q) + " s=" + num(s));
    }
    return o;
}

Outcome c9_threshold() {
    Outcome o;
    const MeasureModel m = make("two_atom", {{"b", 1}});
    for (double s : {2.0, 3.0, 5.0})
        o.require(is_unimodal(make_problem(m, s), Window::autodetect()).unimodal, "b=1 s=" + num(s));
    o.require(!is_unimodal(make_problem(m, 0.3), Window::autodetect()).unimodal, "b=1 s=0.3");
    const MeasureModel sharp = make("two_atom", {{"b", 6.25e-6}});
    const std::size_t n = support_components(make_problem(sharp, 3.75), Window::autodetect()).count();
    o.require(n >= 2, "b=6.25e-6 s=3.75 components " + std::to_string(n));
    o.require(is_unimodal(make_problem(sharp, 4.2), Window::autodetect()).unimodal, "b=6.25e-6 s=4.2");
    return o;
}

Outcome c10_sparse() {
    Outcome o;
    const MeasureModel m = make("sparse");
    const Problem p1 = make_problem(m, 1.0), p10 = make_problem(m, 10.0);
    const SupportReport r1 = support_components(p1, Window::autodetect());
    const SupportReport r10 = support_components(p10, Window::autodetect());
    o.require(r1.atom.present && r1.count() >= 3, "s=1 atom and components " + std::to_string(r1.count()));
    o.require(r10.count() >= 2, "s=10 components " + std::to_string(r10.count()));
    o.require(!is_unimodal(p1, Window::autodetect()).unimodal, "s=1 unimodal");
    o.require(!is_unimodal(p10, Window::autodetect()).unimodal, "s=10 unimodal");
    return o;
}

// Runs after criteria 1-10 and 14 so that it sees all their curves.
Outcome c11_tail_bound() {
    Outcome o;
    const MeasureModel m = make("cauchy");
    const Problem p = make_problem(m, 1.0);
    double tail = 0.0;
    for (const auto& s : curve(p, Window::fixed(-200, 200)).samples())
        if (std::abs(s.psi) > 50.0) tail = std::max(tail, s.f);
    o.require(tail <= 1e-3, "Cauchy tail " + num(tail));
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto& c : all_curves())
        for (const auto& s : c.samples())
            if (s.x != 0.0) {
                worst = std::max(worst, s.f * 2.0 * pi * std::abs(s.x));
                ++checked;
            }
    o.require(checked > 10000, "too few samples");
    o.require(worst <= 1.0 + 1e-12, "max f 2 pi |x| = " + num(worst));
    return o;
}

Outcome c12_angular() {
    Outcome o;
    const MeasureModel m = make("uniform_levy");
    for (double R : {0.5, 1.0, 2.0}) {
        const ThetaScan sc = theta_scan(m.triplet->levy, R, 181);
        // Sign changes of the finite differences, counted directly.
        int changes = 0, prev = 0, first = 0;
        double vmax = 0.0;
        for (double v : sc.values) vmax = std::max(vmax, std::abs(v));
        for (std::size_t k = 1; k < sc.values.size(); ++k) {
            const double d = sc.values[k] - sc.values[k - 1];
            if (std::abs(d) <= 1e-9 * vmax) continue;
            const int sg = d > 0 ? 1 : -1;
            if (prev == 0) first = sg;
            else if (sg != prev) ++changes;
            prev = sg;
        }
        o.require(changes == 1 && first < 0, "R=" + num(R) + " changes " + std::to_string(changes));
        const std::size_t k = std::min_element(sc.values.begin(), sc.values.end()) - sc.values.begin();
        o.require(std::abs(sc.thetas[k] - pi / 2) <= pi / 182 + 1e-12, "R=" + num(R) + " argmin " + num(sc.thetas[k]));
    }
    return o;
}

Outcome c13_small_time() {
    Outcome o;
    const MeasureModel m = make("two_atom", {{"b", 1}});
    const double e1 = std::abs(small_time_functional(m, taper_bump, 0.01, Window::autodetect()) - 1.0);
    const double e4 = std::abs(small_time_functional(m, taper_bump, 0.04, Window::autodetect()) - 1.0);
    o.require(e1 <= 0.05, "error at t=0.01 " + num(e1));
    o.require(e1 < e4, "error " + num(e1) + " not below " + num(e4));
    return o;
}

Outcome c14_normalization() {
    Outcome o;
    struct Law {
        std::string label;
        MeasureModel model;
        double s;
        Window w;
        double scale;
    };
    std::vector<Law> laws;
    const Window a = Window::autodetect();
    laws.push_back({"semicircle", make("semicircle", {{"a", 1}}), 1.0, a, 0.0});
    for (double s : {0.25, 0.5, 0.75, 1.0, 1.25}) laws.push_back({"free_poisson", make("free_poisson"), s, a, 0.0});
    for (double s : {0.5, 1.0, 2.0}) laws.push_back({"cauchy", make("cauchy"), s, Window::fixed(-20, 20), 0.0});
    laws.push_back({"student3", make("student3"), 1.0, Window::fixed(-30, 30), 1.0});
    for (double fa : {0.0, 1.0})
        laws.push_back({"free_meixner a=" + num(fa), make("free_meixner", {{"a", fa}, {"b", 1}}), 1.0, a, 0.0});
    for (double b : {0.5, 1.0, 2.0})
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
            laws.push_back({"free_meixner b=" + num(b), make("free_meixner", {{"a", 0}, {"b", b}}), s, a, 0.0});
    for (double q : {0.75, 0.9})
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
            laws.push_back({"cauchy_mixture p=" + num(q), make("cauchy_mixture", {{"p", q}}), s, mixture_window(s), 1.0});
    for (double s : {0.3, 1.0, 2.0, 3.0, 5.0}) laws.push_back({"two_atom", make("two_atom", {{"b", 1}}), s, a, 0.0});
    for (double s : {3.75, 4.2}) laws.push_back({"two_atom sharp", make("two_atom", {{"b", 6.25e-6}}), s, a, 0.0});
    for (double s : {1.0, 10.0}) laws.push_back({"sparse", make("sparse"), s, a, 0.0});
    for (const Law& l : laws) {
        const double mass = total_mass(make_problem(l.model, l.s, {}, l.scale), l.w);
        o.require(std::abs(mass - 1.0) <= 1e-6, l.label + " s=" + num(l.s) + " mass-1 " + num(mass - 1.0));
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "semicircle oracle", c1_semicircle},
        {2, "Marchenko-Pastur oracle", c2_marchenko_pastur},
        {3, "Cauchy semigroup", c3_cauchy},
        {4, "Student t3 and free Meixner oracles", c4_catalog},
        {5, "free Poisson atom law", c5_atom},
        {6, "classification trichotomy", c6_classification},
        {7, "Cauchy mixture Jurek threshold", c7_jurek},
        {8, "symmetric free Jurek laws unimodal", c8_symmetric_jurek},
        {9, "unimodality threshold and optimality", c9_threshold},
        {10, "sparse atoms never unimodal", c10_sparse},
        {14, "normalization sweep", c14_normalization},
        {11, "tail bound", c11_tail_bound},
        {12, "angular monotonicity", c12_angular},
        {13, "small-time limit", c13_small_time},
    };
    std::vector<std::pair<int, std::string>> lines;
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        lines.emplace_back(c.id, "criterion " + std::to_string(c.id) + ": " + (o.pass ? "PASS" : "FAIL") + " " +
                                     c.title + (o.detail.empty() ? "" : " (" + o.detail + ")"));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
    return failed == 0 ? 0 : 1;
}
