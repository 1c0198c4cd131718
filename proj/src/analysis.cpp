#include "freelevy/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "freelevy/curve_integration.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/parallel.hpp"
#include "freelevy/quadrature.hpp"

namespace freelevy {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Element {
    double psi;
    double h;
    double x;
    int comp = -1;  // -1 for padding, gaps and the atom
    bool atom = false;
};

// Golden-section maximisation of density_at on [a, b].
std::pair<double, double> golden_max(const Problem& p, double a, double b, double tol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = density_at(p, c), fd = density_at(p, d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = density_at(p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = density_at(p, d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

ModeReport count_modes(const DensityCurve& curve, const AtomRecord& atom, const Problem* refine) {
    ModeReport rep;
    rep.s = curve.s;
    rep.atom = atom;

    std::vector<Element> seq;
    seq.push_back({-inf, 0.0, -inf});
    for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
        const auto& cc = curve.components[ci];
        std::size_t defined = 0;
        for (std::size_t i = 0; i < cc.samples.size(); ++i) {
            if (!cc.defined[i] || !std::isfinite(cc.samples[i].f)) continue;
            if (seq.size() > 1 && seq.back().comp == static_cast<int>(ci) && !(cc.samples[i].x > seq.back().x)) continue;
            seq.push_back({cc.samples[i].psi, cc.samples[i].f, cc.samples[i].x, static_cast<int>(ci)});
            ++defined;
        }
        if (defined < 16 && cc.samples.size() < 16)
            throw InsufficientResolution("analysis: a component carries fewer than 16 samples");
        const bool first_in_group = ci == 0 || !curve.components[ci - 1].joins_next;
        if (first_in_group) rep.components.push_back({cc.psi_lo, cc.psi_hi});
        else rep.components.back().hi = cc.psi_hi;
        if (ci + 1 < curve.components.size() && !cc.joins_next) {
            const double mid = 0.5 * (cc.psi_hi + curve.components[ci + 1].psi_lo);
            seq.push_back({mid, 0.0, 0.5 * (cc.range.hi + curve.components[ci + 1].range.lo)});
        }
    }
    seq.push_back({inf, 0.0, inf});
    if (atom.present) {
        auto it = std::find_if(seq.begin() + 1, seq.end(), [&](const Element& e) { return e.psi > atom.location; });
        seq.insert(it, Element{atom.location, inf, std::numeric_limits<double>::quiet_NaN(), -1, true});
    }

    double maxf = curve.regular_max_f();
    if (!(maxf > 0.0))
        for (const auto& e : seq)
            if (std::isfinite(e.h)) maxf = std::max(maxf, e.h);
    const double threshold = 1e-8 * maxf;

    const std::size_t n = seq.size();
    for (std::size_t i = 1; i + 1 < n;) {
        std::size_t j = i;
        while (j + 1 < n - 1 && seq[j + 1].h == seq[i].h) ++j;
        const double h = seq[i].h;
        const bool peak = h > seq[i - 1].h && h > seq[j + 1].h;
        if (peak) {
            double lmin = h, rmin = h;
            for (std::size_t k = i; k-- > 0;) {
                if (seq[k].h > h) break;
                lmin = std::min(lmin, seq[k].h);
            }
            for (std::size_t k = j + 1; k < n; ++k) {
                if (seq[k].h > h) break;
                rmin = std::min(rmin, seq[k].h);
            }
            const double prominence = std::isinf(h) ? inf : h - std::max(lmin, rmin);
            if (prominence >= threshold && prominence > 0.0) {
                // Two equal neighbours are a symmetric pair around the maximum; longer runs are flat.
                if (j > i + 1 && !std::isinf(h))
                    throw InsufficientResolution("analysis: density plateau at psi = " + std::to_string(seq[i].psi));
                Mode m{seq[i].psi, h, seq[i].x, seq[i].atom};
                const bool interior = !m.atom && seq[i - 1].comp == seq[i].comp && seq[j + 1].comp == seq[i].comp;
                if (refine && interior) {
                    const auto [xr, fr] =
                        golden_max(*refine, seq[i - 1].x, seq[j + 1].x, 1e-9 * refine->scale);
                    if (fr > m.height) {
                        m.x = xr;
                        m.height = fr;
                        m.psi = psi_of_x(*refine, xr);
                    }
                    if (std::abs(m.height - seq[i - 1].h) > 1e-2 * maxf || std::abs(m.height - seq[j + 1].h) > 1e-2 * maxf) {
                        std::ostringstream os;
                        os << "analysis: samples around the maximum at psi = " << m.psi
                           << " differ by more than 1% of max f; increase --points";
                        throw InsufficientResolution(os.str());
                    }
                }
                rep.modes.push_back(m);
            }
        }
        i = j + 1;
    }

    rep.unimodal = rep.modes.size() == 1;
    const bool symmetric = refine && refine->model->symmetric();
    std::ostringstream os;
    os << (symmetric ? "symmetric" : "empirical") << ": ";
    if (rep.unimodal) {
        os << (rep.modes.front().atom ? "single mode at the atom" : "single mode");
    } else {
        os << rep.modes.size() << " local maxima";
        if (rep.components.size() > 1) os << " over " << rep.components.size() << " support components";
        if (atom.present) os << " including the atom";
    }
    rep.reason = os.str();
    return rep;
}

ModeReport is_unimodal(const Problem& p, const Window& w, int n) {
    const DensityCurve curve = density_curve(p, w, n);
    const AtomRecord atom = detect_atom(p);
    return count_modes(curve, atom, &p);
}

ThetaScan theta_scan(const LevyMeasure& nu, double R, int n, double reltol) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidParams("analysis: theta scan radius must be positive");
    if (n < 9) throw InvalidParams("analysis: theta scan needs at least 9 points");
    std::vector<double> th(n), val(n, std::numeric_limits<double>::quiet_NaN());
    for (int k = 0; k < n; ++k) th[k] = std::numbers::pi * (k + 1) / (n + 1);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
        const double st = std::sin(th[k]);
        const double x = R * st * std::cos(th[k]);
        const double y = R * st * st;
        if (!(y > std::numeric_limits<double>::min())) return;
        val[k] = integrate(nu, AKernel{x, y}, reltol).value();
    });
    ThetaScan scan;
    scan.R = R;
    for (int k = 0; k < n; ++k) {
        if (std::isnan(val[k])) continue;
        scan.thetas.push_back(th[k]);
        scan.values.push_back(val[k]);
    }
    return scan;
}

int sign_changes(const std::vector<double>& values, double slack, int* first_sign) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    int changes = 0, last = 0;
    if (first_sign) *first_sign = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        if (std::abs(d) <= slack * scale) continue;
        const int sg = d > 0.0 ? 1 : -1;
        if (last == 0) {
            if (first_sign) *first_sign = sg;
        } else if (sg != last) {
            ++changes;
        }
        last = sg;
    }
    return changes;
}

ExtendedReal unimodality_threshold(const FreeTriplet& t, double reltol) {
    if (t.is_point_mass()) throw PointMassError("analysis: the threshold is undefined for a point mass");
    if (t.levy.empty()) return 0.0;
    const ExtendedReal M = support_radius(t.levy);
    if (M.is_infinite()) return ExtendedReal::infinity();
    const ExtendedReal var = second_moment(t.levy, t.a, reltol);
    return 4.0 * M.value() * M.value() / var.value();
}

namespace {

// True when h is nonincreasing along ts (ordered by increasing |t|) up to relative slack.
bool nonincreasing(const std::vector<double>& ts, const std::function<double(double)>& h) {
    double prev = h(ts.front());
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double cur = h(ts[i]);
        if (cur > prev + 1e-9 * std::max(std::abs(prev), std::abs(cur))) return false;
        prev = cur;
    }
    return true;
}

}  // namespace

ClassMembership class_membership(const LevyMeasure& nu, int grid) {
    if (grid < 16) throw InvalidParams("analysis: class membership grid needs at least 16 points");
    if (nu.empty()) return {true, true};
    for (const auto& at : nu.atoms)
        for (const auto& pc : nu.pieces)
            if (at.location >= pc.left && at.location <= pc.right)
                throw UnsupportedShape("analysis: atom at " + std::to_string(at.location) +
                                       " lies inside the support of a density piece");
    if (!nu.atoms.empty()) return {false, false};

    ClassMembership r{true, true};
    for (int side : {1, -1}) {
        std::vector<double> ts;
        const double lo = std::log(1e-8), hi = std::log(1e8);
        for (int k = 0; k < grid; ++k) ts.push_back(side * std::exp(lo + (hi - lo) * k / (grid - 1)));
        for (const auto& pc : nu.pieces)
            for (double e : {pc.left, pc.right})
                if (std::isfinite(e) && e * side > 0.0)
                    for (double f : {1.0 - 1e-9, 1.0 + 1e-9}) ts.push_back(e * f);
        std::sort(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        const bool j = nonincreasing(ts, [&](double t) { return nu.density(t); });
        const bool sd = nonincreasing(ts, [&](double t) { return std::abs(t) * nu.density(t); });
        r.jurek = r.jurek && j;
        r.selfdecomposable = r.selfdecomposable && sd;
    }
    return r;
}

double small_time_functional(const MeasureModel& m, const RealFn& f, double t, const Window& w,
                             const EvalContext& ctx, int n) {
    const Problem p = make_problem(m, t, ctx);
    const DensityCurve curve = density_curve(p, w, n);
    const AtomRecord atom = detect_atom(p);
    double total = curve_integral(curve, f);
    if (atom.present) total += atom.mass * f(atom.location);
    return total / t;
}

}  // namespace freelevy
