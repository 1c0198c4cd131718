#include "freelevy/curve_integration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace freelevy {
namespace {

}  // namespace

double quad_piece(const double* t, const double* P, const double* G, double ta, double tb) {
    static const double gx[3] = {-0.774596669241483377035853079956, 0.0, 0.774596669241483377035853079956};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double d0 = (t[0] - t[1]) * (t[0] - t[2]);
    const double d1 = (t[1] - t[0]) * (t[1] - t[2]);
    const double d2 = (t[2] - t[0]) * (t[2] - t[1]);
    const double c = 0.5 * (ta + tb), h = 0.5 * (tb - ta);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double u = c + h * gx[k];
        const double l0 = (u - t[1]) * (u - t[2]) / d0;
        const double l1 = (u - t[0]) * (u - t[2]) / d1;
        const double l2 = (u - t[0]) * (u - t[1]) / d2;
        const double dl0 = (2.0 * u - t[1] - t[2]) / d0;
        const double dl1 = (2.0 * u - t[0] - t[2]) / d1;
        const double dl2 = (2.0 * u - t[0] - t[1]) / d2;
        const double g = G[0] * l0 + G[1] * l1 + G[2] * l2;
        const double dp = P[0] * dl0 + P[1] * dl1 + P[2] * dl2;
        sum += gw[k] * g * dp;
    }
    return sum * h;
}

namespace {

// Mass of C d^gamma on [0, d1] fitted through (d1, g1), (d2, g2).
double power_end(double d1, double g1, double d2, double g2) {
    if (!(d1 > 0.0) || !(g1 > 0.0)) return 0.0;
    double gamma = 0.0;
    if (d2 > d1 && g2 > 0.0) gamma = std::log(g2 / g1) / std::log(d2 / d1);
    gamma = std::clamp(gamma, -0.95, 10.0);
    return g1 * d1 / (gamma + 1.0);
}

double component_integral(const CurveComponent& cc, const RealFn& weight) {
    std::vector<double> t, P, G;
    for (std::size_t i = 0; i < cc.samples.size(); ++i) {
        if (!cc.defined[i]) continue;
        t.push_back(cc.tau[i]);
        P.push_back(cc.samples[i].psi);
        const double w = weight ? weight(cc.samples[i].psi) : 1.0;
        G.push_back(w * cc.samples[i].f);
    }
    std::size_t lo = 0, hi = t.size();
    double total = 0.0;
    if (hi >= 2 && !cc.defined.front()) {
        total += power_end(P[0] - cc.psi_lo, G[0], P[1] - cc.psi_lo, G[1]);
    } else if (hi >= 4 && cc.range.lo_edge && std::abs(G[0]) > std::abs(G[1])) {
        // Density growing toward the edge: integrate the first interval as a power law.
        total += power_end(P[1] - P[0], G[1], P[2] - P[0], G[2]);
        lo = 1;
    }
    if (hi - lo >= 2 && !cc.defined.back()) {
        total += power_end(cc.psi_hi - P[hi - 1], G[hi - 1], cc.psi_hi - P[hi - 2], G[hi - 2]);
    } else if (hi - lo >= 4 && cc.range.hi_edge && std::abs(G[hi - 1]) > std::abs(G[hi - 2])) {
        total += power_end(P[hi - 1] - P[hi - 2], G[hi - 2], P[hi - 1] - P[hi - 3], G[hi - 3]);
        --hi;
    }
    const std::size_t n = hi - lo;
    if (n == 2) {
        total += 0.5 * (G[lo] + G[lo + 1]) * (P[lo + 1] - P[lo]);
    } else if (n >= 3) {
        std::size_t i = lo;
        for (; i + 2 < hi; i += 2) total += quad_piece(&t[i], &P[i], &G[i], t[i], t[i + 2]);
        if (i + 1 < hi) total += quad_piece(&t[hi - 3], &P[hi - 3], &G[hi - 3], t[hi - 2], t[hi - 1]);
    }
    return total;
}

// Mass in the psi-gap between two components that touch: each side is extended to the
// midpoint of the gap by a power law fitted on its last two samples.
double joint_integral(const CurveComponent& a, const CurveComponent& b, const RealFn& weight) {
    std::vector<const CurveSample*> l, r;
    for (std::size_t i = a.samples.size(); i-- > 0 && l.size() < 2;)
        if (a.defined[i] && std::isfinite(a.samples[i].f)) l.push_back(&a.samples[i]);
    for (std::size_t i = 0; i < b.samples.size() && r.size() < 2; ++i)
        if (b.defined[i] && std::isfinite(b.samples[i].f)) r.push_back(&b.samples[i]);
    if (l.size() < 2 || r.size() < 2) return 0.0;
    const double mid = 0.5 * (l[0]->psi + r[0]->psi);
    auto g = [&](const CurveSample* c) { return (weight ? weight(c->psi) : 1.0) * c->f; };
    return power_end(mid - l[0]->psi, g(l[0]), mid - l[1]->psi, g(l[1])) +
           power_end(r[0]->psi - mid, g(r[0]), r[1]->psi - mid, g(r[1]));
}

}  // namespace

double curve_integral(const DensityCurve& c, const RealFn& weight) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.components.size(); ++i) {
        total += component_integral(c.components[i], weight);
        if (c.components[i].joins_next && i + 1 < c.components.size())
            total += joint_integral(c.components[i], c.components[i + 1], weight);
    }
    return total;
}

double window_mass(const DensityCurve& c) { return curve_integral(c, RealFn{}); }

double curve_mass(const DensityCurve& c) { return window_mass(c) + c.tail_lower + c.tail_upper; }

}  // namespace freelevy
