#include "freelevy/measure_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freelevy/errors.hpp"
#include "freelevy/quadrature.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {

double LevyMeasure::density(double t) const {
    double d = 0.0;
    for (const auto& p : pieces)
        if (t > p.left && t < p.right) d += p.density(t);
    return d;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ExtendedReal total_mass(const LevyMeasure& nu, double reltol) { return integrate(nu, MassKernel{}, reltol); }

ExtendedReal second_moment(const LevyMeasure& nu, double a, double reltol) {
    return ExtendedReal(a) + integrate(nu, SquareKernel{}, reltol);
}

double shift_constant(const FreeTriplet& t, double reltol) {
    if (t.levy.symmetric) return t.eta;
    for (const auto& p : t.levy.pieces)
        if (p.touches_zero() && p.zero_exponent >= 2.0)
            throw DivergentCompensator("measure_model: integral of |t| over [-1,1] diverges; shift constant undefined");
    double c = t.eta;
    for (const auto& a : t.levy.atoms)
        if (std::abs(a.location) <= 1.0) c -= a.weight * a.location;
    if (!t.levy.pieces.empty()) {
        LevyMeasure dens{{}, t.levy.pieces, false};
        CustomKernel k{[](double x) { return std::abs(x) <= 1.0 ? x : 0.0; }};
        c -= integrate_finite(dens, k, reltol);
    }
    return c;
}

ExtendedReal support_radius(const LevyMeasure& nu) {
    double m = 0.0;
    for (const auto& a : nu.atoms) m = std::max(m, std::abs(a.location));
    for (const auto& p : nu.pieces) {
        if (p.unbounded()) return ExtendedReal::infinity();
        m = std::max({m, std::abs(p.left), std::abs(p.right)});
    }
    return ExtendedReal(m);
}

namespace {

std::vector<double> symmetry_grid(const LevyMeasure& nu) {
    std::vector<double> g;
    for (int k = -60; k <= 60; ++k) g.push_back(std::pow(10.0, k / 10.0));
    for (const auto& p : nu.pieces) {
        for (double e : {p.left, p.right}) {
            if (!std::isfinite(e) || e == 0.0) continue;
            const double a = std::abs(e);
            for (double f : {0.25, 0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) g.push_back(a * f);
        }
    }
    return g;
}

}  // namespace

bool check_symmetry(const LevyMeasure& nu) {
    for (const auto& a : nu.atoms) {
        bool found = false;
        for (const auto& b : nu.atoms) {
            if (std::abs(b.location + a.location) <= 1e-12 * std::abs(a.location) &&
                std::abs(b.weight - a.weight) <= 1e-10 * a.weight)
                found = true;
        }
        if (!found) return false;
    }
    for (double t : symmetry_grid(nu)) {
        const double p = nu.density(t), q = nu.density(-t);
        if (!std::isfinite(p) || !std::isfinite(q)) return false;
        if (std::abs(p - q) > 1e-10 * std::max(1.0, std::max(std::abs(p), std::abs(q)))) return false;
    }
    return true;
}

LevyMeasure merge(const LevyMeasure& a, const LevyMeasure& b) {
    LevyMeasure m = a;
    m.atoms.insert(m.atoms.end(), b.atoms.begin(), b.atoms.end());
    m.pieces.insert(m.pieces.end(), b.pieces.begin(), b.pieces.end());
    m.symmetric = a.symmetric && b.symmetric;
    return m;
}

FreeTriplet scale_triplet(const FreeTriplet& t, double s) {
    FreeTriplet r;
    r.eta = s * t.eta;
    r.a = s * t.a;
    r.levy.symmetric = t.levy.symmetric;
    for (const auto& a : t.levy.atoms) r.levy.atoms.push_back({a.location, s * a.weight});
    for (const auto& p : t.levy.pieces) {
        DensityPiece q = p;
        RealFn f = p.density;
        q.density = [f, s](double x) { return s * f(x); };
        r.levy.pieces.push_back(q);
    }
    return r;
}

ValidationReport validate(const MeasureModel& m, double reltol) {
    ValidationReport rep;
    auto add = [&](std::string name, bool ok, std::string detail) {
        rep.checks.push_back({std::move(name), ok, std::move(detail)});
    };
    if (m.triplet) {
        const FreeTriplet& t = *m.triplet;
        const LevyMeasure& nu = t.levy;
        add("a >= 0", t.a >= 0.0, "a = " + std::to_string(t.a));

        bool zero_ok = true, weight_ok = true, distinct_ok = true;
        for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
            if (nu.atoms[i].location == 0.0) zero_ok = false;
            if (!(nu.atoms[i].weight > 0.0)) weight_ok = false;
            for (std::size_t j = i + 1; j < nu.atoms.size(); ++j)
                if (nu.atoms[i].location == nu.atoms[j].location) distinct_ok = false;
        }
        add("atom locations nonzero", zero_ok, zero_ok ? "" : "nu({0}) = 0 violated");
        add("atom weights positive", weight_ok, "");
        add("atom locations distinct", distinct_ok, "");

        bool shape_ok = true;
        std::string shape_detail;
        for (const auto& p : nu.pieces) {
            if (!(p.left < p.right)) {
                shape_ok = false;
                shape_detail = "piece support must satisfy left < right";
            }
            if (p.touches_zero() && !(p.zero_exponent < 3.0)) {
                shape_ok = false;
                shape_detail = "zero exponent must be < 3";
            }
            if (p.unbounded() && !(p.tail_exponent > 0.0)) {
                shape_ok = false;
                shape_detail = "tail exponent must be > 0";
            }
            if (!p.density) {
                shape_ok = false;
                shape_detail = "piece has no density evaluator";
            }
        }
        add("density pieces well formed", shape_ok, shape_detail);

        bool nonneg = true;
        for (const auto& p : nu.pieces) {
            if (!p.density) continue;
            for (int k = 1; k < 200 && nonneg; ++k) {
                const double u = k / 200.0;
                double t;
                if (std::isfinite(p.left) && std::isfinite(p.right)) t = p.left + u * (p.right - p.left);
                else if (std::isfinite(p.left)) t = p.left + u / (1.0 - u);
                else if (std::isfinite(p.right)) t = p.right - u / (1.0 - u);
                else t = std::tan(M_PI * (u - 0.5));
                if (t == 0.0) continue;
                const double v = p.density(t);
                if (!(v >= 0.0) || !std::isfinite(v)) nonneg = false;
            }
        }
        add("densities nonnegative and finite", nonneg, "");

        if (shape_ok) {
            try {
                const ExtendedReal integ = integrate(nu, Min1SquareKernel{}, reltol);
                rep.integrability = integ.value();
                const bool ok = integ.is_finite() && integ.value() <= 1e12;
                add("integral of min(1, t^2) finite", ok, "value = " + integ.to_string());
            } catch (const Error& e) {
                add("integral of min(1, t^2) finite", false, e.what());
            }
        }
        if (nu.symmetric) add("declared symmetry holds", check_symmetry(nu), "");
        rep.point_mass = t.is_point_mass();
        if (rep.point_mass) add("point mass", true, "model is a point mass at eta");
    }
    if (m.triplet && m.closed_phi) {
        double worst = 0.0;
        bool ok = true;
        for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            for (double y : {0.1, 1.0, 10.0}) {
                try {
                    const cplx pt = phi_triplet(*m.triplet, {x, y}, reltol);
                    const cplx pc = m.closed_phi({x, y});
                    const double d = std::abs(pt - pc) / (1.0 + std::abs(pc));
                    worst = std::max(worst, d);
                } catch (const Error&) {
                    ok = false;
                }
            }
        }
        ok = ok && worst <= 1e-6;
        std::ostringstream os;
        os << "max relative discrepancy " << worst;
        add("triplet and closed-form phi agree", ok, os.str());
    }
    if (m.triplet || m.closed_phi) {
        double worst = -1e300;
        bool ok = true;
        for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            for (double y : {0.1, 1.0, 10.0}) {
                try {
                    worst = std::max(worst, phi(m, UpperHalfPoint(x, y)).imag());
                } catch (const Error&) {
                    ok = false;
                }
            }
        }
        std::ostringstream os;
        os << "max Im phi " << worst;
        add("Pick property Im phi <= 0", ok && worst <= 1e-9, os.str());
    }
    return rep;
}

}  // namespace freelevy
