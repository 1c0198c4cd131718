#include "freelevy/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "freelevy/analysis.hpp"
#include "freelevy/catalog.hpp"
#include "freelevy/curve_integration.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/inversion.hpp"

namespace freelevy {

bool CaseResult::pass() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const CaseRow& r) { return r.pass; });
}

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

CaseRow within(const std::string& label, double expected, double computed, double tol) {
    return {label, fmt(expected), fmt(computed), "abs " + fmt(tol), std::abs(computed - expected) <= tol};
}

CaseRow at_most(const std::string& label, double computed, double bound) {
    return {label, "<= " + fmt(bound), fmt(computed), "bound", computed <= bound};
}

CaseRow equals(const std::string& label, const std::string& expected, const std::string& computed) {
    return {label, expected, computed, "exact", expected == computed};
}

// One law of a semigroup with the window used to sample it.
struct Law {
    std::string label;
    MeasureModel model;
    double s;
    Window window;
    double scale = 0.0;
};

double total_mass_of(const Law& l, const EvalContext& ctx) {
    const Problem p = make_problem(l.model, l.s, ctx, l.scale);
    const DensityCurve c = density_curve(p, l.window, 512);
    const AtomRecord a = detect_atom(p);
    return curve_mass(c) + (a.present ? a.mass : 0.0);
}

double sup_error(const DensityCurve& c, const std::function<double(double)>& ref, double lo = -1e300,
                 double hi = 1e300) {
    double e = 0.0;
    for (const auto& s : c.samples())
        if (s.psi >= lo && s.psi <= hi) e = std::max(e, std::abs(s.f - ref(s.psi)));
    return e;
}

Window cauchy_mixture_window(double s) {
    const double W = 40.0 * std::max(1.0, s);
    return Window::fixed(-W, W);
}

std::vector<Law> classification_laws() {
    std::vector<Law> v;
    v.push_back({"semicircle a=1 s=1", make("semicircle", {{"a", 1}}), 1.0, Window::autodetect()});
    v.push_back({"free_poisson s=1", make("free_poisson"), 1.0, Window::autodetect()});
    for (double s : {0.5, 1.0, 2.0})
        v.push_back({"cauchy s=" + fmt(s), make("cauchy"), s, Window::fixed(-20, 20)});
    v.push_back({"student3 s=1", make("student3"), 1.0, Window::fixed(-30, 30), 1.0});
    v.push_back({"free_meixner a=0 b=1 s=1", make("free_meixner", {{"a", 0}, {"b", 1}}), 1.0, Window::autodetect()});
    v.push_back({"free_meixner a=1 b=1 s=1", make("free_meixner", {{"a", 1}, {"b", 1}}), 1.0, Window::autodetect()});
    for (double s : {0.25, 0.5, 0.75, 1.25})
        v.push_back({"free_poisson s=" + fmt(s), make("free_poisson"), s, Window::autodetect()});
    for (double s : {0.3, 1.0, 2.0, 3.0, 5.0})
        v.push_back({"two_atom b=1 s=" + fmt(s), make("two_atom", {{"b", 1}}), s, Window::autodetect()});
    for (double b : {0.5, 1.0, 2.0})
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
            v.push_back({"free_meixner a=0 b=" + fmt(b) + " s=" + fmt(s), make("free_meixner", {{"a", 0}, {"b", b}}),
                         s, Window::autodetect()});
    for (double p : {0.75, 0.9})
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
            v.push_back({"cauchy_mixture p=" + fmt(p) + " s=" + fmt(s), make("cauchy_mixture", {{"p", p}}), s,
                         cauchy_mixture_window(s), 1.0});
    for (double s : {3.75, 4.2})
        v.push_back({"two_atom b=6.25e-6 s=" + fmt(s), make("two_atom", {{"b", 6.25e-6}}), s, Window::autodetect()});
    for (double s : {1.0, 10.0}) v.push_back({"sparse N=4 s=" + fmt(s), make("sparse"), s, Window::autodetect()});
    return v;
}

CaseResult semicircle_oracle(const EvalContext& ctx) {
    CaseResult r{"semicircle-oracle", "semicircle a=1, s=1 against sqrt(4-u^2)/(2 pi)", {}};
    const MeasureModel m = make("semicircle", {{"a", 1}});
    const Problem p = make_problem(m, 1.0, ctx);
    const DensityCurve c = density_curve(p, Window::autodetect(), 1001);
    r.rows.push_back(at_most("sup |f - oracle|", sup_error(c, m.reference_density), 1e-8));
    r.rows.push_back(within("mass", 1.0, curve_mass(c), 1e-8));
    return r;
}

CaseResult marchenko_pastur_oracle(const EvalContext& ctx) {
    CaseResult r{"marchenko-pastur-oracle", "free Poisson s=1 against sqrt((4-u)u)/(2 pi u) on [0.1, 3.9]", {}};
    const MeasureModel m = make("free_poisson");
    const Problem p = make_problem(m, 1.0, ctx);
    const DensityCurve c = density_curve(p, Window::autodetect(), 512);
    r.rows.push_back(at_most("sup |f - oracle|", sup_error(c, m.reference_density, 0.1, 3.9), 1e-6));
    return r;
}

CaseResult cauchy_semigroup(const EvalContext& ctx) {
    CaseResult r{"cauchy-semigroup", "Cauchy law at time s is s/(pi (x^2 + s^2)) on the window [-20, 20]", {}};
    const MeasureModel m = make("cauchy");
    for (double s : {0.5, 1.0, 2.0}) {
        const Problem p = make_problem(m, s, ctx);
        const DensityCurve c = density_curve(p, Window::fixed(-20, 20), 512);
        const double e = sup_error(c, [s](double u) { return s / (pi * (u * u + s * s)); });
        r.rows.push_back(at_most("s=" + fmt(s) + " sup error", e, 1e-6));
    }
    return r;
}

double interior_error(const MeasureModel& m, double scale, const Window& w, const EvalContext& ctx) {
    const Problem p = make_problem(m, 1.0, ctx, scale);
    const auto comps = x_components(p, resolve_window(p, w));
    double e = 0.0;
    for (const auto& c : comps)
        for (int k = 1; k <= 401; ++k) {
            const PointEval pe = evaluate_point(p, c.lo + (c.hi - c.lo) * k / 402.0);
            e = std::max(e, std::abs(pe.f - m.reference_density(pe.psi)));
        }
    return e;
}

CaseResult catalog_oracles(const EvalContext& ctx) {
    CaseResult r{"catalog-oracles", "Student t3 and free Meixner densities at s=1 over 401 interior points", {}};
    r.rows.push_back(at_most("student3 sup error", interior_error(make("student3"), 1.0, Window::fixed(-30, 30), ctx), 1e-5));
    for (double a : {0.0, 1.0}) {
        const MeasureModel m = make("free_meixner", {{"a", a}, {"b", 1}});
        r.rows.push_back(at_most("free_meixner a=" + fmt(a) + " b=1 sup error",
                                 interior_error(m, 0.0, Window::autodetect(), ctx), 1e-5));
    }
    return r;
}

CaseResult atom_law(const EvalContext& ctx) {
    CaseResult r{"atom-law", "free Poisson atom at 0 with mass 1 - s for s < 1", {}};
    const MeasureModel m = make("free_poisson");
    for (double s : {0.25, 0.5, 0.75}) {
        const Problem p = make_problem(m, s, ctx);
        const AtomRecord a = detect_atom_triplet(p);
        const AtomRecord l = detect_atom_limit(p);
        r.rows.push_back(equals("s=" + fmt(s) + " atom present", "true", yes_no(a.present)));
        r.rows.push_back(within("s=" + fmt(s) + " location", 0.0, a.location, 1e-10));
        r.rows.push_back(within("s=" + fmt(s) + " mass", 1.0 - s, a.mass, 1e-10));
        r.rows.push_back(within("s=" + fmt(s) + " limit path mass", a.mass, l.present ? l.mass : 0.0, 1e-6));
    }
    const Problem p = make_problem(m, 1.25, ctx);
    r.rows.push_back(equals("s=1.25 atom present", "false", yes_no(detect_atom(p).present)));
    return r;
}

CaseResult classification_trichotomy(const EvalContext& ctx) {
    CaseResult r{"classification-trichotomy", "continuity classes of the semigroup", {}};
    auto tag = [&](const MeasureModel& m, double s) { return std::string(to_string(classify(make_problem(m, s, ctx)).tag)); };
    r.rows.push_back(equals("two_atom b=1 s=1", "ContinuousDensityOnR", tag(make("two_atom", {{"b", 1}}), 1.0)));
    r.rows.push_back(equals("free_poisson s=1", "AbsolutelyContinuousOnly", tag(make("free_poisson"), 1.0)));
    r.rows.push_back(equals("free_poisson s=0.5", "AtomPlusAC", tag(make("free_poisson"), 0.5)));
    for (double s : {0.1, 1.0, 10.0})
        r.rows.push_back(equals("semicircle s=" + fmt(s), "ContinuousDensityOnR", tag(make("semicircle"), s)));
    return r;
}

CaseResult jurek_threshold(const EvalContext& ctx) {
    CaseResult r{"jurek-threshold", "Cauchy mixture c_p is in the free Jurek class iff p >= (5 + sqrt 5)/10", {}};
    for (auto [p, expect] : {std::pair{0.73, true}, std::pair{0.70, false}}) {
        const MeasureModel m = make("cauchy_mixture", {{"p", p}});
        r.rows.push_back(equals("p=" + fmt(p) + " jurek", yes_no(expect), yes_no(class_membership(m.triplet->levy).jurek)));
    }
    const MeasureModel m = make("cauchy_mixture", {{"p", 0.75}});
    EvalContext tri = ctx, cl = ctx;
    tri.path = EvalPath::Triplet;
    cl.path = EvalPath::Closed;
    double worst = 0.0;
    for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0})
        for (double y : {0.1, 1.0, 10.0}) {
            const cplx a = phi(m, UpperHalfPoint(x, y), tri), b = phi(m, UpperHalfPoint(x, y), cl);
            worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
        }
    r.rows.push_back(at_most("p=0.75 triplet vs closed phi", worst, 1e-6));
    return r;
}

CaseRow unimodal_row(const std::string& label, const MeasureModel& m, double s, const Window& w, double scale,
                     bool expect, const EvalContext& ctx) {
    const Problem p = make_problem(m, s, ctx, scale);
    const ModeReport rep = is_unimodal(p, w);
    return equals(label + " unimodal", yes_no(expect), yes_no(rep.unimodal));
}

CaseResult symmetric_jurek_unimodal(const EvalContext& ctx) {
    CaseResult r{"symmetric-jurek-unimodal", "symmetric free Jurek laws stay unimodal at every time", {}};
    for (double b : {0.5, 1.0, 2.0})
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
            r.rows.push_back(unimodal_row("free_meixner b=" + fmt(b) + " s=" + fmt(s),
                                          make("free_meixner", {{"a", 0}, {"b", b}}), s, Window::autodetect(), 0.0,
                                          true, ctx));
    for (double p : {0.75, 0.9})
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0})
            r.rows.push_back(unimodal_row("cauchy_mixture p=" + fmt(p) + " s=" + fmt(s),
                                          make("cauchy_mixture", {{"p", p}}), s, cauchy_mixture_window(s), 1.0, true,
                                          ctx));
    return r;
}

CaseResult threshold_optimality(const EvalContext& ctx) {
    CaseResult r{"threshold-optimality", "unimodal from s = 4 M^2 / sigma^2 on, and the constant 4 is sharp", {}};
    const MeasureModel m = make("two_atom", {{"b", 1}});
    r.rows.push_back(within("two_atom b=1 threshold", 2.0, unimodality_threshold(*m.triplet).value(), 1e-12));
    for (double s : {2.0, 3.0, 5.0})
        r.rows.push_back(unimodal_row("two_atom b=1 s=" + fmt(s), m, s, Window::autodetect(), 0.0, true, ctx));
    r.rows.push_back(unimodal_row("two_atom b=1 s=0.3", m, 0.3, Window::autodetect(), 0.0, false, ctx));
    const MeasureModel mb = make("two_atom", {{"b", 6.25e-6}});
    const SupportReport sr = support_components(make_problem(mb, 3.75, ctx), Window::autodetect());
    r.rows.push_back({"two_atom b=6.25e-6 s=3.75 components", ">= 2", std::to_string(sr.count()), "count",
                      sr.count() >= 2});
    r.rows.push_back(unimodal_row("two_atom b=6.25e-6 s=4.2", mb, 4.2, Window::autodetect(), 0.0, true, ctx));
    return r;
}

CaseResult sparse_never_unimodal(const EvalContext& ctx) {
    CaseResult r{"sparse-never-unimodal", "sparse atoms 2^n with weights 2^(-n^2): never unimodal", {}};
    const MeasureModel m = make("sparse");
    for (double s : {1.0, 10.0}) {
        const Problem p = make_problem(m, s, ctx);
        const SupportReport sr = support_components(p, Window::autodetect());
        const ModeReport rep = is_unimodal(p, Window::autodetect());
        r.rows.push_back(equals("s=" + fmt(s) + " unimodal", "false", yes_no(rep.unimodal)));
        const std::size_t need = s == 1.0 ? 3 : 2;
        r.rows.push_back({"s=" + fmt(s) + " components", ">= " + std::to_string(need), std::to_string(sr.count()),
                          "count", sr.count() >= need});
        if (s == 1.0) r.rows.push_back(equals("s=1 atom present", "true", yes_no(sr.atom.present)));
    }
    return r;
}

CaseResult tail_bound(const EvalContext& ctx) {
    CaseResult r{"tail-bound", "f(psi(x)) <= 1/(2 pi |x|) on every sample; Cauchy tail beyond |psi| = 50", {}};
    double worst = 0.0;
    for (const Law& l : classification_laws()) {
        const Problem p = make_problem(l.model, l.s, ctx, l.scale);
        const DensityCurve c = density_curve(p, l.window, 512);
        for (const auto& smp : c.samples())
            if (smp.x != 0.0) worst = std::max(worst, smp.f * 2.0 * pi * std::abs(smp.x));
    }
    r.rows.push_back(at_most("max f 2 pi |x|", worst, 1.0 + 1e-12));
    const MeasureModel cauchy = make("cauchy");
    const Problem p = make_problem(cauchy, 1.0, ctx);
    const DensityCurve c = density_curve(p, Window::fixed(-200, 200), 512);
    double tail = 0.0;
    for (const auto& smp : c.samples())
        if (std::abs(smp.psi) > 50.0) tail = std::max(tail, smp.f);
    r.rows.push_back(at_most("Cauchy s=1 max f over |psi| > 50", tail, 1e-3));
    return r;
}

CaseResult angular_monotonicity(const EvalContext& ctx) {
    CaseResult r{"angular-monotonicity", "theta scan of the uniform Levy measure decreases then increases", {}};
    const MeasureModel m = make("uniform_levy", {{"c", 1}});
    for (double R : {0.5, 1.0, 2.0}) {
        const ThetaScan sc = theta_scan(m.triplet->levy, R, 181, ctx.reltol);
        int first = 0;
        const int changes = sign_changes(sc.values, 1e-9, &first);
        const auto it = std::min_element(sc.values.begin(), sc.values.end());
        const double at = sc.thetas[static_cast<std::size_t>(it - sc.values.begin())];
        r.rows.push_back({"R=" + fmt(R) + " sign changes", "1 (decrease first)",
                          std::to_string(changes) + (first < 0 ? " (decrease first)" : " (increase first)"), "exact",
                          changes == 1 && first < 0});
        r.rows.push_back(within("R=" + fmt(R) + " argmin theta", pi / 2, at, pi / 182 + 1e-12));
    }
    return r;
}

double plateau_bump(double x) {
    const double u = std::abs(x - 1.0);
    if (u <= 0.25) return 1.0;
    if (u >= 0.5) return 0.0;
    auto e = [](double q) { return q > 0.0 ? std::exp(-1.0 / q) : 0.0; };
    const double q = (u - 0.25) / 0.25;
    return e(1.0 - q) / (e(1.0 - q) + e(q));
}

CaseResult small_time_limit(const EvalContext& ctx) {
    CaseResult r{"small-time-limit", "(1/t) E f -> integral of f against the Levy measure as t -> 0", {}};
    const MeasureModel m = make("two_atom", {{"b", 1}});
    const double e1 = std::abs(small_time_functional(m, plateau_bump, 0.01, Window::autodetect(), ctx) - 1.0);
    const double e4 = std::abs(small_time_functional(m, plateau_bump, 0.04, Window::autodetect(), ctx) - 1.0);
    r.rows.push_back(at_most("t=0.01 error", e1, 0.05));
    r.rows.push_back({"error decreases", "err(0.01) < err(0.04)", fmt(e1) + " < " + fmt(e4), "strict", e1 < e4});
    return r;
}

CaseResult normalization(const EvalContext& ctx) {
    CaseResult r{"normalization", "atom mass plus curve integral equals 1", {}};
    r.rows.push_back(within("semicircle a=1 s=1 (1001 points)", 1.0,
                            [&] {
                                const MeasureModel m = make("semicircle", {{"a", 1}});
                                const Problem p = make_problem(m, 1.0, ctx);
                                return curve_mass(density_curve(p, Window::autodetect(), 1001));
                            }(),
                            1e-6));
    for (const Law& l : classification_laws()) r.rows.push_back(within(l.label, 1.0, total_mass_of(l, ctx), 1e-6));
    return r;
}

struct CaseDef {
    const char* id;
    const char* alias;
    CaseResult (*run)(const EvalContext&);
};

const std::vector<CaseDef>& cases() {
    static const std::vector<CaseDef> v = {
        {"semicircle-oracle", nullptr, semicircle_oracle},
        {"marchenko-pastur-oracle", nullptr, marchenko_pastur_oracle},
        {"cauchy-semigroup", nullptr, cauchy_semigroup},
        {"catalog-oracles", nullptr, catalog_oracles},
        {"atom-law", nullptr, atom_law},
        {"classification-trichotomy", nullptr, classification_trichotomy},
        {"jurek-threshold", "ex4.6-jurek-threshold", jurek_threshold},
        {"symmetric-jurek-unimodal", nullptr, symmetric_jurek_unimodal},
        {"threshold-optimality", "thm5.1-optimality", threshold_optimality},
        {"sparse-never-unimodal", nullptr, sparse_never_unimodal},
        {"tail-bound", nullptr, tail_bound},
        {"angular-monotonicity", nullptr, angular_monotonicity},
        {"small-time-limit", nullptr, small_time_limit},
        {"normalization", nullptr, normalization},
    };
    return v;
}

CaseResult run_guarded(const CaseDef& c, const EvalContext& ctx) {
    try {
        return c.run(ctx);
    } catch (const Error& e) {
        return {c.id, "error", {{"run", "no error", e.what(), "-", false}}};
    }
}

}  // namespace

std::vector<std::string> case_ids() {
    std::vector<std::string> ids;
    for (const auto& c : cases()) ids.push_back(c.id);
    return ids;
}

std::vector<CaseResult> reproduce(const std::string& id, const EvalContext& ctx) {
    std::vector<CaseResult> out;
    for (const auto& c : cases())
        if (id == "all" || id == c.id || (c.alias && id == c.alias)) out.push_back(run_guarded(c, ctx));
    if (out.empty()) {
        std::string msg = "reproduce: unknown case '" + id + "'; available: all";
        for (const auto& c : cases()) {
            msg += ", ";
            msg += c.id;
            if (c.alias) msg += std::string(" (") + c.alias + ")";
        }
        throw UnknownCase(msg);
    }
    return out;
}

std::string format_table(const std::vector<CaseResult>& results) {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& c : results) {
        os << (c.pass() ? "PASS " : "FAIL ") << c.id << ": " << c.title << '\n';
        for (const auto& row : c.rows)
            os << "  [" << (row.pass ? "ok" : "FAIL") << "] " << row.label << "  expected " << row.expected
               << "  computed " << row.computed << "  tolerance " << row.tolerance << '\n';
        passed += c.pass() ? 1 : 0;
    }
    os << passed << "/" << results.size() << " cases passed\n";
    return os.str();
}

}  // namespace freelevy
