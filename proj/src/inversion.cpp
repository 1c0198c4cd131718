#include "freelevy/inversion.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "freelevy/curve_integration.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/parallel.hpp"
#include "freelevy/quadrature.hpp"

namespace freelevy {

const char* to_string(ClassTag t) {
    switch (t) {
        case ClassTag::ContinuousDensityOnR: return "ContinuousDensityOnR";
        case ClassTag::AbsolutelyContinuousOnly: return "AbsolutelyContinuousOnly";
        case ClassTag::AtomPlusAC: return "AtomPlusAC";
        case ClassTag::PointMass: return "PointMass";
    }
    return "?";
}

Problem make_problem(const MeasureModel& m, double s, const EvalContext& ctx, double scale_override) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidParams("inversion: time s must be positive and finite");
    Problem p;
    p.model = &m;
    p.s = s;
    p.ctx = ctx;
    double scale = 1.0;
    if (scale_override > 0.0) {
        scale = scale_override;
    } else if (m.triplet) {
        const ExtendedReal sm = second_moment(m.triplet->levy, m.triplet->a, ctx.reltol);
        if (sm.is_finite()) scale = std::max(1.0, std::sqrt(s * sm.value()));
    }
    p.scale = scale;
    p.y_floor = 1e-12 * scale;
    return p;
}

namespace {

double bval(const Problem& p, double x, double y) { return b_value(*p.model, x, y, p.ctx); }

}  // namespace

bool in_support_set(const Problem& p, double x) {
    try {
        return p.s * bval(p, x, p.y_floor) > 1.0;
    } catch (const NonConvergent&) {
        // Membership only needs the side of 1/s; retry where round-off limits the quadrature.
        EvalContext loose = p.ctx;
        loose.reltol = 1e-4;
        return p.s * b_value(*p.model, x, p.y_floor, loose) > 1.0;
    }
}

double v_of_x(const Problem& p, double x) {
    if (!in_support_set(p, x)) return 0.0;
    auto h = [&](double l) { return std::log(p.s * bval(p, x, std::exp(l))); };
    const double step = std::log(16.0);
    const double lfloor = std::log(p.y_floor);
    const double lcap = std::log(1e15 * p.scale);
    double lo, hi, hlo, hhi;
    const double l0 = std::log(p.scale);
    const double h0 = h(l0);
    if (h0 > 0.0) {
        lo = l0;
        hlo = h0;
        for (;;) {
            hi = lo + step;
            if (hi > lcap)
                throw BracketFailure("inversion: no upper bracket for v(x) below y = 1e15 * scale at x = " +
                                     std::to_string(x));
            hhi = h(hi);
            if (hhi <= 0.0) break;
            lo = hi;
            hlo = hhi;
        }
    } else {
        hi = l0;
        hhi = h0;
        for (;;) {
            const double cand = hi - step;
            if (cand <= lfloor) {
                lo = lfloor;
                try {
                    hlo = std::max(h(lfloor), 1e-300);
                } catch (const NonConvergent&) {
                    hlo = 1e-300;  // positive by the membership test
                }
                break;
            }
            const double hc = h(cand);
            if (hc > 0.0) {
                lo = cand;
                hlo = hc;
                break;
            }
            hi = cand;
            hhi = hc;
        }
    }
    if (hhi == 0.0) return std::exp(hi);
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12; };
    const auto r = boost::math::tools::toms748_solve(h, lo, hi, hlo, hhi, tol, iters);
    return std::exp(0.5 * (r.first + r.second));
}

PointEval evaluate_point(const Problem& p, double x) {
    PointEval e;
    e.x = x;
    e.v = v_of_x(p, x);
    const double y = std::max(e.v, p.y_floor);
    const cplx ph = phi(*p.model, UpperHalfPoint(x, y), p.ctx);
    e.psi = x + p.s * ph.real();
    if (e.v > 0.0) {
        const double residual = std::abs(e.v + p.s * ph.imag());
        if (residual > 1e-8 * std::max(1.0 + std::abs(e.psi), p.scale)) {
            std::ostringstream os;
            os << "inversion: boundary consistency violated at x = " << x << " (|Im F^-1| = " << residual << ")";
            throw NonConvergent(os.str(), e.psi, residual);
        }
    }
    if (e.v == 0.0 && std::abs(x) <= degenerate_gap * p.scale) {
        e.defined = false;
        e.f = std::numeric_limits<double>::quiet_NaN();
    } else {
        e.f = e.v / (std::numbers::pi * (x * x + e.v * e.v));
    }
    return e;
}

double psi_of_x(const Problem& p, double x) { return evaluate_point(p, x).psi; }

double density_at(const Problem& p, double x) { return evaluate_point(p, x).f; }

AtomRecord detect_atom_triplet(const Problem& p) {
    if (!p.model->triplet) throw Unclassifiable("inversion: model '" + p.model->name + "' has no triplet");
    const FreeTriplet& t = *p.model->triplet;
    if (t.is_point_mass()) return {true, p.s * t.eta, 1.0};
    if (t.a > 0.0) return {};
    const ExtendedReal mass = total_mass(t.levy, p.ctx.reltol);
    if (mass.is_infinite()) return {};
    const double snu = p.s * mass.value();
    const double band = 10.0 * p.ctx.reltol * std::max(1.0, snu);
    if (!(snu < 1.0 - band)) return {};
    return {true, p.s * shift_constant(t, p.ctx.reltol), 1.0 - snu};
}

AtomRecord detect_atom_limit(const Problem& p) {
    if (in_support_set(p, 0.0)) return {};
    const double eps[3] = {1e-4 * p.scale, 1e-5 * p.scale, 1e-6 * p.scale};
    double w[3], loc[3];
    for (int i = 0; i < 3; ++i) {
        const cplx ph = phi(*p.model, UpperHalfPoint(0.0, eps[i]), p.ctx);
        w[i] = 1.0 + p.s * ph.imag() / eps[i];
        loc[i] = p.s * ph.real();
    }
    // Quadratic extrapolation to eps = 0.
    auto extrapolate = [&](const double* f) {
        double r = 0.0;
        for (int i = 0; i < 3; ++i) {
            double l = 1.0;
            for (int j = 0; j < 3; ++j)
                if (j != i) l *= (0.0 - eps[j]) / (eps[i] - eps[j]);
            r += l * f[i];
        }
        return r;
    };
    const double w0 = extrapolate(w);
    if (!(w0 > 1e-6)) return {};
    return {true, extrapolate(loc), std::min(w0, 1.0)};
}

AtomRecord detect_atom(const Problem& p) {
    if (p.model->triplet && p.ctx.path != EvalPath::Closed) return detect_atom_triplet(p);
    return detect_atom_limit(p);
}

Classification classify(const Problem& p) {
    if (!p.model->triplet)
        throw Unclassifiable("inversion: classification needs a free characteristic triplet; model '" +
                             p.model->name + "' is closed-form only");
    const FreeTriplet& t = *p.model->triplet;
    Classification c;
    c.s_a = p.s * t.a;
    if (t.is_point_mass()) {
        c.tag = ClassTag::PointMass;
        c.atom = {true, p.s * t.eta, 1.0};
        c.s_nu_mass = 0.0;
        return c;
    }
    const ExtendedReal mass = total_mass(t.levy, p.ctx.reltol);
    c.s_nu_mass = p.s * mass;
    if (c.s_a > 0.0 || mass.is_infinite()) {
        c.tag = ClassTag::ContinuousDensityOnR;
        return c;
    }
    const double snu = c.s_nu_mass.value();
    const double band = 10.0 * p.ctx.reltol * std::max(1.0, snu);
    if (snu > 1.0 + band) {
        c.tag = ClassTag::ContinuousDensityOnR;
    } else if (std::abs(snu - 1.0) <= band) {
        c.tag = ClassTag::AbsolutelyContinuousOnly;
    } else {
        c.tag = ClassTag::AtomPlusAC;
        c.atom = detect_atom_triplet(p);
    }
    return c;
}

Interval resolve_window(const Problem& p, const Window& w) {
    if (!w.automatic) {
        if (!(w.lo < w.hi) || !std::isfinite(w.lo) || !std::isfinite(w.hi))
            throw InvalidParams("inversion: window must satisfy lo < hi");
        return {w.lo, w.hi};
    }
    double radius = 0.0;
    if (p.model->triplet) {
        const ExtendedReal m = support_radius(p.model->triplet->levy);
        if (m.is_infinite())
            throw WindowUnresolved(
                "inversion: the Levy measure has unbounded support, so {v > 0} is unbounded; pass an explicit "
                "--window LO:HI");
        radius = m.value();
    }
    double W = 1.0;
    while (W <= radius) W *= 2.0;
    const double cap = std::ldexp(1.0, 30);
    for (; W <= cap; W *= 2.0) {
        if (p.s * bval(p, W, p.y_floor) < 1.0 && p.s * bval(p, -W, p.y_floor) < 1.0) return {-W, W};
    }
    throw WindowUnresolved("inversion: automatic window reached 2^30 without enclosing {v > 0}; pass an explicit "
                           "--window LO:HI");
}

namespace {

struct Probe {
    double x;
    bool in;
};

// Narrows [a, b] with in(a) != in(b) to neighbouring floating point numbers.
std::pair<Probe, Probe> bisect_boundary(const Problem& p, Probe a, Probe b) {
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a.x + b.x);
        if (m <= std::min(a.x, b.x) || m >= std::max(a.x, b.x)) break;
        if (std::abs(b.x - a.x) <= 1e-15 * p.scale) break;
        const Probe pm{m, in_support_set(p, m)};
        if (pm.in == a.in) a = pm;
        else b = pm;
    }
    return {a, b};
}

bool measure_free(const LevyMeasure& nu, double a, double b) {
    for (const auto& at : nu.atoms)
        if (at.location > a && at.location < b) return false;
    for (const auto& pc : nu.pieces)
        if (pc.right > a && pc.left < b) return false;
    return true;
}

}  // namespace

bool gap_is_degenerate(const Problem& p, double a, double b) {
    if (b - a <= degenerate_gap * p.scale) return true;
    if (!p.model->triplet || !(a < 0.0 && b > 0.0)) return false;
    const LevyMeasure& nu = p.model->triplet->levy;
    for (int k = 0; k <= 8; ++k) {
        const double t = a + (b - a) * k / 8.0;
        if (t != 0.0 && !(nu.density(t) > 0.0)) return false;
    }
    return true;
}

std::vector<XComponent> x_components(const Problem& p, Interval window, int probes) {
    probes = std::max(probes, 16);
    std::vector<double> seeds;
    seeds.push_back(window.lo);
    seeds.push_back(window.hi);
    for (int i = 0; i < probes; ++i) seeds.push_back(window.lo + (window.hi - window.lo) * (i + 0.5) / probes);
    auto add_seed = [&](double x) {
        if (x > window.lo && x < window.hi) seeds.push_back(x);
    };
    add_seed(0.0);
    const LevyMeasure* nu = p.model->triplet ? &p.model->triplet->levy : nullptr;
    if (nu) {
        for (const auto& at : nu->atoms) add_seed(at.location);
        for (const auto& pc : nu->pieces) {
            for (double e : {pc.left, pc.right}) {
                if (!std::isfinite(e)) continue;
                add_seed(e - 1e-6 * p.scale);
                add_seed(e + 1e-6 * p.scale);
            }
        }
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::vector<Probe> pts(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) { pts[i] = {seeds[i], in_support_set(p, seeds[i])}; });

    std::vector<std::vector<Probe>> extra(pts.size());
    parallel_for(pts.size() - 1, [&](std::size_t i) {
        const Probe a = pts[i], b = pts[i + 1];
        auto& out = extra[i];
        if (a.in != b.in) {
            const auto [pa, pb] = bisect_boundary(p, a, b);
            out.push_back(pa);
            out.push_back(pb);
        } else if (a.in && b.in && nu && measure_free(*nu, a.x, b.x) && !(a.x < 0.0 && b.x > 0.0)) {
            // b is convex on intervals free of Levy mass; a hidden gap shows up as a dip below 1/s.
            auto g = [&](double x) { return p.s * bval(p, x, p.y_floor); };
            const auto r = boost::math::tools::brent_find_minima(g, a.x, b.x, 40);
            if (r.second <= 1.0) {
                const Probe mid{r.first, false};
                const auto [l1, l2] = bisect_boundary(p, a, mid);
                const auto [r1, r2] = bisect_boundary(p, mid, b);
                out.insert(out.end(), {l1, l2, mid, r1, r2});
            }
        }
    });
    std::vector<Probe> all = pts;
    for (const auto& e : extra) all.insert(all.end(), e.begin(), e.end());
    std::sort(all.begin(), all.end(), [](const Probe& a, const Probe& b) { return a.x < b.x; });

    std::vector<XComponent> comps;
    for (std::size_t i = 0; i < all.size();) {
        if (!all[i].in) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < all.size() && all[j + 1].in) ++j;
        XComponent c;
        c.lo = all[i].x;
        c.hi = all[j].x;
        c.lo_edge = i > 0;
        c.hi_edge = j + 1 < all.size();
        if (c.hi > c.lo) comps.push_back(c);
        i = j + 1;
    }
    return comps;
}

namespace {

struct Sampled {
    double tau;
    PointEval e;
};

double map_tau(const XComponent& c, double tau) {
    const double L = c.hi - c.lo;
    if (tau <= 0.0) return c.lo;
    if (tau >= 1.0) return c.hi;
    if (c.lo_edge && c.hi_edge) return c.lo + 0.5 * L * (1.0 - std::cos(std::numbers::pi * tau));
    if (c.lo_edge) return c.lo + L * (1.0 - std::cos(0.5 * std::numbers::pi * tau));
    if (c.hi_edge) return c.lo + L * std::sin(0.5 * std::numbers::pi * tau);
    return c.lo + L * tau;
}

void evaluate_batch(const Problem& p, const XComponent& c, const std::vector<double>& taus,
                    std::vector<Sampled>& out) {
    std::vector<Sampled> res(taus.size());
    parallel_for(taus.size(), [&](std::size_t i) { res[i] = {taus[i], evaluate_point(p, map_tau(c, taus[i]))}; });
    out.insert(out.end(), res.begin(), res.end());
    std::sort(out.begin(), out.end(), [](const Sampled& a, const Sampled& b) { return a.tau < b.tau; });
}

double finite_max_f(const std::vector<Sampled>& s, double t_lo, double t_hi) {
    double m = 0.0;
    for (const auto& x : s)
        if (x.tau >= t_lo && x.tau <= t_hi && x.e.defined && std::isfinite(x.e.f)) m = std::max(m, x.e.f);
    return m;
}

double divided_difference4(const double* t, const double* g) {
    double d[5];
    for (int i = 0; i < 5; ++i) d[i] = g[i];
    for (int order = 1; order < 5; ++order)
        for (int i = 0; i + order < 5; ++i) d[i] = (d[i + 1] - d[i]) / (t[i + order] - t[i]);
    return d[0];
}

CurveComponent sample_component(const Problem& p, const XComponent& c, int m) {
    std::vector<Sampled> smp;
    std::vector<double> taus;
    for (int i = 0; i < m; ++i) taus.push_back(static_cast<double>(i) / (m - 1));
    evaluate_batch(p, c, taus, smp);

    auto max_v = [&] {
        double mv = 0.0;
        for (const auto& x : smp) mv = std::max(mv, x.e.v);
        return mv;
    };
    // Geometric refinement toward genuine edges until v is negligible next to the edge.
    for (int side = 0; side < 2; ++side) {
        if ((side == 0 && !c.lo_edge) || (side == 1 && !c.hi_edge)) continue;
        for (int depth = 0; depth < 60; ++depth) {
            const double mv = max_v();
            const Sampled& nb = side == 0 ? smp[1] : smp[smp.size() - 2];
            const Sampled& edge = side == 0 ? smp.front() : smp.back();
            if (nb.e.v < 1e-6 * mv) break;
            const double t = 0.5 * (nb.tau + edge.tau);
            if (t == nb.tau || t == edge.tau) break;
            evaluate_batch(p, c, {t}, smp);
        }
    }
    // Interior refinement where neighbouring samples differ by more than 1% of the maxima
    // taken away from the edge zones, where the density may blow up.
    const std::size_t cap = static_cast<std::size_t>(m) * 40;
    const double t_lo = 1.0 / (m - 1), t_hi = 1.0 - 1.0 / (m - 1);
    for (int pass = 0; pass < 12 && smp.size() < cap; ++pass) {
        const double mv = max_v();
        const double mf = finite_max_f(smp, t_lo, t_hi);
        std::vector<double> add;
        for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
            const auto& a = smp[i].e;
            const auto& b = smp[i + 1].e;
            bool refine = std::abs(a.v - b.v) > 0.01 * mv;
            if (a.defined && b.defined && std::abs(a.f - b.f) > 0.01 * mf) refine = true;
            const double t = 0.5 * (smp[i].tau + smp[i + 1].tau);
            if (refine && t > smp[i].tau && t < smp[i + 1].tau && smp[i + 1].tau - smp[i].tau > 1e-9)
                add.push_back(t);
        }
        if (add.empty()) break;
        evaluate_batch(p, c, add, smp);
    }

    // Refinement driven by the curve integral: the two quadratics sharing an interval must agree.
    for (int pass = 0; pass < 16 && smp.size() < cap; ++pass) {
        std::vector<double> t, P, G;
        for (const auto& x : smp) {
            if (!x.e.defined || !std::isfinite(x.e.f)) continue;
            t.push_back(x.tau);
            P.push_back(x.e.psi);
            G.push_back(x.e.f);
        }
        std::vector<double> add;
        for (std::size_t j = 1; j + 2 < t.size(); ++j) {
            if (j == 1 && c.lo_edge) continue;
            if (j + 3 == t.size() && c.hi_edge) continue;
            const double a = quad_piece(&t[j - 1], &P[j - 1], &G[j - 1], t[j], t[j + 1]);
            const double b = quad_piece(&t[j], &P[j], &G[j], t[j], t[j + 1]);
            double est = std::abs(a - b);
            // The two quadratics agree at symmetric extrema; the fourth difference catches those.
            const std::size_t k = std::clamp<std::size_t>(j, 2, t.size() >= 5 ? t.size() - 3 : 2);
            if (t.size() >= 5) {
                const double h = t[j + 1] - t[j];
                est = std::max(est, std::abs(divided_difference4(&t[k - 2], &G[k - 2])) * h * h * h * h *
                                        std::abs(P[j + 1] - P[j]) / 720.0);
            }
            const double mid = 0.5 * (t[j] + t[j + 1]);
            if (est > 1e-10 && t[j + 1] - t[j] > 1e-9 && mid > t[j] && mid < t[j + 1]) add.push_back(mid);
        }
        if (add.empty()) break;
        evaluate_batch(p, c, add, smp);
    }

    CurveComponent cc;
    cc.range = c;
    for (const auto& x : smp)
        if (x.tau >= t_lo && x.tau <= t_hi && x.e.defined && std::isfinite(x.e.f))
            cc.regular_max_f = std::max(cc.regular_max_f, x.e.f);
    cc.psi_lo = smp.front().e.psi;
    cc.psi_hi = smp.back().e.psi;
    for (const auto& x : smp) {
        cc.tau.push_back(x.tau);
        cc.samples.push_back({x.e.x, x.e.v, x.e.psi, x.e.f});
        cc.defined.push_back(x.e.defined);
    }
    return cc;
}

}  // namespace

std::vector<CurveSample> DensityCurve::samples() const {
    std::vector<CurveSample> out;
    for (const auto& c : components)
        for (std::size_t i = 0; i < c.samples.size(); ++i)
            if (c.defined[i] && (out.empty() || c.samples[i].x > out.back().x)) out.push_back(c.samples[i]);
    return out;
}

double DensityCurve::regular_max_f() const {
    double m = 0.0;
    for (const auto& c : components) m = std::max(m, c.regular_max_f);
    return m;
}

double upper_tail_mass(const Problem& p, double x) {
    const double v1 = v_of_x(p, x);
    const double y1 = std::max(v1, p.y_floor);
    const cplx w1(x, y1);
    const cplx ph1 = phi(*p.model, UpperHalfPoint(x, y1), p.ctx);
    const double t1 = std::atan2(y1, x);
    const double t2 = p.s * (ph1 / w1).imag();
    RealFn g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double y = y1 / u;
        if (!std::isfinite(y)) return 0.0;
        const cplx w(x, y);
        const cplx ph = phi(*p.model, UpperHalfPoint(x, y), p.ctx);
        return (ph / (w * w)).real() * y1 / (u * u);
    };
    const double t3 = -p.s * integrate_interval(g, 0.0, 1.0, std::max(1e-12, 10.0 * p.ctx.reltol));
    return (t1 + t2 + t3) / std::numbers::pi;
}

DensityCurve density_curve(const Problem& p, const Window& w, int n) {
    if (n < 16) throw InvalidParams("inversion: density curve needs at least 16 samples");
    DensityCurve curve;
    curve.s = p.s;
    curve.scale = p.scale;
    curve.window = resolve_window(p, w);
    const auto comps = x_components(p, curve.window, std::max(n, 256));
    double total = 0.0;
    for (const auto& c : comps) total += c.hi - c.lo;
    for (const auto& c : comps) {
        const int m = std::max(32, static_cast<int>(std::lround(n * (c.hi - c.lo) / total)));
        curve.components.push_back(sample_component(p, c, m));
    }
    for (std::size_t i = 0; i + 1 < curve.components.size(); ++i) {
        curve.components[i].joins_next =
            gap_is_degenerate(p, curve.components[i].range.hi, curve.components[i + 1].range.lo);
    }
    if (!curve.components.empty()) {
        const AtomRecord atom = detect_atom(p);
        const auto& first = curve.components.front();
        const auto& last = curve.components.back();
        if (!first.range.lo_edge && first.range.lo <= curve.window.lo) {
            double t = 1.0 - upper_tail_mass(p, first.range.lo);
            if (atom.present && atom.location < first.psi_lo) t -= atom.mass;
            curve.tail_lower = std::max(0.0, t);
        }
        if (!last.range.hi_edge && last.range.hi >= curve.window.hi) {
            double t = upper_tail_mass(p, last.range.hi);
            if (atom.present && atom.location > last.psi_hi) t -= atom.mass;
            curve.tail_upper = std::max(0.0, t);
        }
    }
    return curve;
}

SupportReport support_components(const Problem& p, const Window& w, int probes) {
    SupportReport rep;
    const Interval win = resolve_window(p, w);
    const auto comps = x_components(p, win, probes);
    std::vector<XComponent> merged;
    for (const auto& c : comps) {
        if (!merged.empty() && gap_is_degenerate(p, merged.back().hi, c.lo)) {
            merged.back().hi = c.hi;
            merged.back().hi_edge = c.hi_edge;
        } else {
            merged.push_back(c);
        }
    }
    for (const auto& c : merged) {
        rep.x_intervals.push_back({c.lo, c.hi});
        rep.psi_intervals.push_back({psi_of_x(p, c.lo), psi_of_x(p, c.hi)});
    }
    rep.atom = detect_atom(p);
    return rep;
}

}  // namespace freelevy
