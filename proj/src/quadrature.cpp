#include "freelevy/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "freelevy/errors.hpp"

namespace freelevy {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Rule {
    double value;
    double error;
    double abs_value;
};

template <class F>
Rule gk21(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = 0.0;
    double resk = fc * wgk[10];
    double resabs = std::abs(resk);
    double fv1[10];
    double fv2[10];
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = h * xgk[jtw];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += wg[j] * (f1 + f2);
        resk += wgk[jtw] * (f1 + f2);
        resabs += wgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = h * xgk[jtwm1];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += wgk[jtwm1] * (f1 + f2);
        resabs += wgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    const double ah = std::abs(h);
    Rule r{resk * h, std::abs((resk - resg) * h), resabs * ah};
    resasc *= ah;
    if (resasc != 0.0 && r.error != 0.0)
        r.error = resasc * std::min(1.0, std::pow(200.0 * r.error / resasc, 1.5));
    if (r.abs_value > std::numeric_limits<double>::min() / (50.0 * eps))
        r.error = std::max(50.0 * eps * r.abs_value, r.error);
    return r;
}

std::atomic<std::uint64_t> g_integrals{0};
std::atomic<std::uint64_t> g_panels{0};
std::atomic<double> g_worst{0.0};

void record_stats(std::size_t panels, double err, double scale) {
    g_integrals.fetch_add(1, std::memory_order_relaxed);
    g_panels.fetch_add(panels, std::memory_order_relaxed);
    const double rel = scale > 0.0 ? err / scale : 0.0;
    double cur = g_worst.load(std::memory_order_relaxed);
    while (rel > cur && !g_worst.compare_exchange_weak(cur, rel, std::memory_order_relaxed)) {
    }
}

// Mapping of a sub-range of the t-axis onto a finite u-interval. Linear segments are
// written as t = center + u so that offsets from a kernel focus are exact.
struct Segment {
    enum Kind { Linear, ZeroPower, Tail } kind = Linear;
    double sign = 1.0;  // direction away from 0 for ZeroPower / Tail
    double scale = 1.0;  // L for ZeroPower, T for Tail
    double power = 1.0;  // p for ZeroPower, q for Tail
    double center = 0.0;
    double u0 = 0.0;
    double u1 = 1.0;
    double t0 = 0.0;
    double t1 = 0.0;
    const DensityPiece* piece = nullptr;

    double t_of(double u) const {
        switch (kind) {
            case Linear: return center + u;
            case ZeroPower: return sign * scale * std::pow(u, power);
            case Tail: return sign * scale * std::pow(u, -power);
        }
        return u;
    }
    double jacobian(double u) const {
        switch (kind) {
            case Linear: return 1.0;
            case ZeroPower: return scale * power * std::pow(u, power - 1.0);
            case Tail: return scale * power * std::pow(u, -power - 1.0);
        }
        return 1.0;
    }
    // Inverse map, for t inside the segment.
    double u_of(double t) const {
        switch (kind) {
            case Linear: return t - center;
            case ZeroPower: return std::pow(std::abs(t) / scale, 1.0 / power);
            case Tail: return std::pow(std::abs(t) / scale, -1.0 / power);
        }
        return t;
    }
    bool contains_t(double t) const { return t > t0 && t < t1; }
};

// Kernel adaptors: value, behaviour at 0 and at infinity, and points needing resolution.
struct KA {
    double x, y;
    static constexpr bool has_x = true;
    double at(double t, double d) const { return t * t / (d * d + y * y); }
    double operator()(double t) const { return at(t, x - t); }
    static constexpr double zero_order = 2, tail_order = 0;
    static constexpr bool nonnegative = true, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>& f) const { f.push_back({x, y}); }
};
struct KReF {
    double x, y;
    static constexpr bool has_x = true;
    double at(double t, double d) const {
        const double den = d * d + y * y;
        if (std::abs(t) > 1.0) return t * (x * d + y * y) / den;
        return t * t * d / den;
    }
    double operator()(double t) const { return at(t, x - t); }
    static constexpr double zero_order = 2, tail_order = 0;
    static constexpr bool nonnegative = false, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>& f) const { f.push_back({x, y}); }
};
struct KSquare {
    static constexpr bool has_x = false;
    double operator()(double t) const { return t * t; }
    static constexpr double zero_order = 2, tail_order = 2;
    static constexpr bool nonnegative = true, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>&) const {}
};
struct KMass {
    static constexpr bool has_x = false;
    double operator()(double) const { return 1.0; }
    static constexpr double zero_order = 0, tail_order = 0;
    static constexpr bool nonnegative = true, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>&) const {}
};
struct KImB {
    static constexpr bool has_x = false;
    double y;
    double operator()(double t) const { return t * t / (t * t + y * y); }
    static constexpr double zero_order = 2, tail_order = 0;
    static constexpr bool nonnegative = true, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>& f) const { f.push_back({0.0, y}); }
};
struct KReB {
    static constexpr bool has_x = false;
    double y;
    double operator()(double t) const {
        const double den = t * t + y * y;
        if (std::abs(t) > 1.0) return t * y * y / den;
        return -t * t * t / den;
    }
    static constexpr double zero_order = 3, tail_order = -1;
    static constexpr bool nonnegative = false, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>& f) const { f.push_back({0.0, y}); }
};
struct KMin1 {
    static constexpr bool has_x = false;
    double operator()(double t) const { return std::min(1.0, t * t); }
    static constexpr double zero_order = 2, tail_order = 0;
    static constexpr bool nonnegative = true, vanishes_near_zero = false;
    void focus(std::vector<std::pair<double, double>>&) const {}
};
struct KCustom {
    static constexpr bool has_x = false;
    const RealFn* f;
    double operator()(double t) const { return (*f)(t); }
    static constexpr double zero_order = 2, tail_order = 0;
    static constexpr bool nonnegative = false, vanishes_near_zero = true;
    void focus(std::vector<std::pair<double, double>>&) const {}
};

// Kernel value at t given d = x - t (ignored by kernels without a focus in x).
template <class K>
double kernel_at(const K& k, double t, double d) {
    if constexpr (K::has_x) return k.at(t, d);
    else return k(t);
}

template <class K>
double kernel_x(const K& k) {
    if constexpr (K::has_x) return k.x;
    else return std::numeric_limits<double>::quiet_NaN();
}

void add_unique(std::vector<double>& v, double x) {
    if (std::isfinite(x)) v.push_back(x);
}

// Geometric breakpoints c, c +- w 4^k resolving a peak of width w at c.
void geometric_points(std::vector<double>& pts, double c, double w, double lo, double hi) {
    if (!(w > 0.0) || !std::isfinite(c)) return;
    double far = std::max(std::abs(c), 1.0);
    for (double e : {lo, hi})
        if (std::isfinite(e)) far = std::max(far, std::abs(e));
    pts.push_back(c);
    double d = w;
    for (int k = 0; k < 80 && d < 4.0 * far; ++k, d *= 4.0) {
        pts.push_back(c - d);
        pts.push_back(c + d);
    }
}

struct Panel {
    double u0, u1;
    int seg;
    Rule r;
    bool operator<(const Panel& o) const { return r.error < o.r.error; }
};

struct AdaptiveResult {
    double value;
    double error;
    double abs_value;
    std::size_t panels;
};

// Global adaptive subdivision over a list of (segment, u0, u1) starting panels.
template <class F>
AdaptiveResult adapt(const F& f, const std::vector<std::pair<int, std::pair<double, double>>>& starts,
                        double reltol, std::size_t max_panels, double abs_floor = 0.0) {
    std::priority_queue<Panel> queue;
    std::vector<Panel> frozen;
    double total = 0.0, err = 0.0, l1 = 0.0;
    for (const auto& [seg, range] : starts) {
        if (!(range.second > range.first)) continue;
        Panel p{range.first, range.second, seg, gk21([&](double u) { return f(seg, u); }, range.first, range.second)};
        total += p.r.value;
        err += p.r.error;
        l1 += p.r.abs_value;
        queue.push(p);
    }
    std::size_t count = queue.size();
    const double tol_factor = std::max(reltol, 20.0 * eps);
    while (!queue.empty() && err > std::max(tol_factor * l1, abs_floor)) {
        Panel p = queue.top();
        queue.pop();
        const double mid = 0.5 * (p.u0 + p.u1);
        const double width = p.u1 - p.u0;
        if (width <= 64.0 * eps * std::max({std::abs(p.u0), std::abs(p.u1), 1e-300}) || mid <= p.u0 ||
            mid >= p.u1) {
            frozen.push_back(p);
            continue;
        }
        if (count >= max_panels) {
            throw NonConvergent("quadrature: panel limit reached with error estimate " + std::to_string(err) +
                                    " above tolerance " + std::to_string(tol_factor * l1),
                                total, err);
        }
        auto g = [&](double u) { return f(p.seg, u); };
        Panel a{p.u0, mid, p.seg, gk21(g, p.u0, mid)};
        Panel b{mid, p.u1, p.seg, gk21(g, mid, p.u1)};
        total += a.r.value + b.r.value - p.r.value;
        err += a.r.error + b.r.error - p.r.error;
        l1 += a.r.abs_value + b.r.abs_value - p.r.abs_value;
        queue.push(a);
        queue.push(b);
        ++count;
    }
    // Resum to remove drift from incremental updates.
    total = err = l1 = 0.0;
    std::vector<Panel> all = std::move(frozen);
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) {
        return x.seg != y.seg ? x.seg < y.seg : x.u0 < y.u0;
    });
    for (const auto& p : all) {
        total += p.r.value;
        err += p.r.error;
        l1 += p.r.abs_value;
    }
    if (err > std::max(tol_factor * l1, abs_floor) * 1.0000001 && err > 0.0) {
        throw NonConvergent("quadrature: error estimate " + std::to_string(err) +
                                " stalled above tolerance " + std::to_string(tol_factor * l1),
                            total, err);
    }
    return {total, err, l1, count};
}

template <class K>
ExtendedReal integrate_impl(const LevyMeasure& nu, const K& k, const QuadratureOptions& opt) {
    const bool fold = nu.symmetric;
    double atom_sum = 0.0;
    for (const auto& at : nu.atoms) {
        if (fold) {
            if (at.location > 0.0) atom_sum += at.weight * (k(at.location) + k(-at.location));
        } else {
            atom_sum += at.weight * k(at.location);
        }
    }

    // Divergence from exponent hints.
    for (const auto& pc : nu.pieces) {
        bool diverges = false;
        if (!K::vanishes_near_zero && pc.touches_zero() && 1.0 + K::zero_order - pc.zero_exponent <= 0.0)
            diverges = true;
        if (pc.unbounded() && pc.tail_exponent - K::tail_order <= 0.0) diverges = true;
        if (diverges) {
            if (K::nonnegative) return ExtendedReal::infinity();
            throw DivergentCompensator("quadrature: compensated kernel is not integrable against this measure");
        }
    }
    if (nu.pieces.empty()) return ExtendedReal(atom_sum);

    std::vector<std::pair<double, double>> foci;
    k.focus(foci);
    if (fold) {
        const std::size_t n = foci.size();
        for (std::size_t i = 0; i < n; ++i) foci.push_back({-foci[i].first, foci[i].second});
    }

    std::vector<Segment> segs;
    for (const auto& pc : nu.pieces) {
        double lo = pc.left, hi = pc.right;
        if (fold) lo = std::max(lo, 0.0);
        if (!(hi > lo)) continue;
        std::vector<double> cuts{lo};
        // Substituted segments stay clear of the foci: mapped abscissae lose absolute precision.
        std::vector<double> inner{-1.0, 0.0, 1.0};
        for (const auto& fc : foci)
            if (fc.first != 0.0) {
                inner.push_back(0.5 * fc.first);
                inner.push_back(2.0 * fc.first);
            }
        std::sort(inner.begin(), inner.end());
        for (double c : inner)
            if (c > lo && c < hi && c != cuts.back()) cuts.push_back(c);
        cuts.push_back(hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            Segment s;
            s.piece = &pc;
            if (std::isinf(b) || std::isinf(a)) {
                s.kind = Segment::Tail;
                s.sign = std::isinf(b) ? 1.0 : -1.0;
                s.scale = std::isinf(b) ? std::abs(a) : std::abs(b);
                s.power = 1.0 / (pc.tail_exponent - K::tail_order);
                s.u0 = 0.0;
                s.u1 = 1.0;
            } else if (opt.endpoint_substitution && !K::vanishes_near_zero && (a == 0.0 || b == 0.0) &&
                       pc.zero_exponent > 0.0) {
                s.kind = Segment::ZeroPower;
                s.sign = (a == 0.0) ? 1.0 : -1.0;
                s.scale = (a == 0.0) ? b : -a;
                s.power = 1.0 / (1.0 + K::zero_order - pc.zero_exponent);
                s.u0 = 0.0;
                s.u1 = 1.0;
            } else {
                s.kind = Segment::Linear;
                // Centre on the nearest focus so the peak is resolved in exact offsets.
                double best = std::numeric_limits<double>::infinity();
                for (const auto& fc : foci) {
                    const double dist = fc.first < a ? a - fc.first : (fc.first > b ? fc.first - b : 0.0);
                    if (dist < best && dist <= (b - a)) {
                        best = dist;
                        s.center = fc.first;
                    }
                }
                s.u0 = a - s.center;
                s.u1 = b - s.center;
            }
            s.t0 = a;
            s.t1 = b;
            segs.push_back(s);
        }
    }

    std::vector<std::pair<int, std::pair<double, double>>> starts;
    for (std::size_t si = 0; si < segs.size(); ++si) {
        const Segment& s = segs[si];
        std::vector<double> up{s.u0, s.u1};
        for (const auto& [c, w] : foci) {
            std::vector<double> tp;
            if (s.kind == Segment::Linear && c == s.center) {
                geometric_points(tp, 0.0, w, s.u0, s.u1);
                for (double u : tp)
                    if (u > s.u0 && u < s.u1) up.push_back(u);
            } else {
                geometric_points(tp, c, w, s.t0, s.t1);
                for (double t : tp)
                    if (s.contains_t(t)) add_unique(up, s.u_of(t));
            }
        }
        std::sort(up.begin(), up.end());
        up.erase(std::unique(up.begin(), up.end()), up.end());
        for (std::size_t i = 0; i + 1 < up.size(); ++i)
            if (up[i + 1] > up[i]) starts.push_back({static_cast<int>(si), {up[i], up[i + 1]}});
    }

    const double kx = kernel_x(k);
    auto f = [&](int si, double u) -> double {
        const Segment& s = segs[si];
        const double t = s.t_of(u);
        if (!std::isfinite(t) || t == 0.0) return 0.0;
        const double rho = s.piece->density(t);
        if (rho == 0.0) return 0.0;
        double dp = kx - t, dm = kx + t;  // x - t and x - (-t)
        if (s.kind == Segment::Linear) {
            if (s.center == kx) dp = -u;
            else if (s.center == -kx) dm = u;
        }
        const double kv = fold ? kernel_at(k, t, dp) + kernel_at(k, -t, dm) : kernel_at(k, t, dp);
        const double v = rho * kv * s.jacobian(u);
        return std::isfinite(v) ? v : 0.0;
    };
    // Folding a signed kernel cancels k(t) against k(-t); measure accuracy against the unfolded size.
    double abs_floor = 0.0;
    if (fold && !K::nonnegative) {
        auto mag = [&](int si, double u) -> double {
            const Segment& s = segs[si];
            const double t = s.t_of(u);
            if (!std::isfinite(t) || t == 0.0) return 0.0;
            const double v = s.piece->density(t) * (std::abs(k(t)) + std::abs(k(-t))) * s.jacobian(u);
            return std::isfinite(v) ? v : 0.0;
        };
        double l1 = 0.0;
        for (const auto& [si, r] : starts)
            l1 += gk21([&](double u) { return mag(si, u); }, r.first, r.second).abs_value;
        abs_floor = std::max(opt.reltol, 20.0 * eps) * l1;
    }
    auto res = adapt<decltype(f)>(f, starts, opt.reltol, opt.max_panels, abs_floor);
    record_stats(res.panels, res.error, std::max(res.abs_value, abs_floor / std::max(opt.reltol, 20.0 * eps)));
    return ExtendedReal(atom_sum + res.value);
}

}  // namespace

bool DensityPiece::unbounded() const { return std::isinf(left) || std::isinf(right); }

ExtendedReal integrate(const LevyMeasure& nu, const Kernel& k, const QuadratureOptions& opt) {
    if (!(opt.reltol >= 1e-14 && opt.reltol <= 1e-2))
        throw InvalidParams("quadrature: reltol must lie in [1e-14, 1e-2]");
    return std::visit(
        [&](const auto& kk) -> ExtendedReal {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, AKernel>) return integrate_impl(nu, KA{kk.x, kk.y}, opt);
            else if constexpr (std::is_same_v<T, ReFKernel>) return integrate_impl(nu, KReF{kk.x, kk.y}, opt);
            else if constexpr (std::is_same_v<T, SquareKernel>) return integrate_impl(nu, KSquare{}, opt);
            else if constexpr (std::is_same_v<T, MassKernel>) return integrate_impl(nu, KMass{}, opt);
            else if constexpr (std::is_same_v<T, ImBoundaryKernel>) return integrate_impl(nu, KImB{kk.y}, opt);
            else if constexpr (std::is_same_v<T, ReBoundaryKernel>) return integrate_impl(nu, KReB{kk.y}, opt);
            else if constexpr (std::is_same_v<T, Min1SquareKernel>) return integrate_impl(nu, KMin1{}, opt);
            else return integrate_impl(nu, KCustom{&kk.f}, opt);
        },
        k);
}

ExtendedReal integrate(const LevyMeasure& nu, const Kernel& k, double reltol) {
    QuadratureOptions opt;
    opt.reltol = reltol;
    return integrate(nu, k, opt);
}

double integrate_finite(const LevyMeasure& nu, const Kernel& k, double reltol) {
    const ExtendedReal r = integrate(nu, k, reltol);
    if (r.is_infinite()) throw DivergentCompensator("quadrature: integral diverges");
    return r.value();
}

double integrate_interval(const RealFn& g, double a, double b, double reltol, std::size_t max_panels) {
    if (a == b) return 0.0;
    const double sgn = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    auto f = [&](int, double u) { return g(u); };
    std::vector<std::pair<int, std::pair<double, double>>> starts{{0, {lo, hi}}};
    auto res = adapt<decltype(f)>(f, starts, std::max(reltol, 20.0 * eps), max_panels);
    record_stats(res.panels, res.error, res.abs_value);
    return sgn * res.value;
}

QuadratureStats quadrature_stats() {
    return {g_integrals.load(), g_panels.load(), g_worst.load()};
}

void reset_quadrature_stats() {
    g_integrals = 0;
    g_panels = 0;
    g_worst = 0.0;
}

}  // namespace freelevy
