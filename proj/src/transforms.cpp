#include "freelevy/transforms.hpp"

#include <cmath>

#include "freelevy/errors.hpp"
#include "freelevy/quadrature.hpp"

namespace freelevy {

UpperHalfPoint::UpperHalfPoint(double x_, double y_) : x(x_), y(y_) {
    if (!(y_ > 0.0)) throw InvalidParams("transforms: point must lie in the upper half-plane (y > 0)");
}

bool uses_triplet(const MeasureModel& m, const EvalContext& ctx) {
    switch (ctx.path) {
        case EvalPath::Triplet:
            if (!m.has_triplet()) throw Unclassifiable("transforms: model '" + m.name + "' has no triplet");
            return true;
        case EvalPath::Closed:
            if (!m.has_closed_phi())
                throw UnknownReference("transforms: model '" + m.name + "' has no closed-form phi");
            return false;
        case EvalPath::Auto:
            break;
    }
    if (m.has_triplet()) return true;
    if (m.has_closed_phi()) return false;
    throw InvalidParams("transforms: model '" + m.name + "' has neither triplet nor closed-form phi");
}

cplx phi_triplet(const FreeTriplet& t, cplx z, double reltol) {
    const double x = z.real(), y = z.imag();
    const double r2 = x * x + y * y;
    double re = t.eta + t.a * x / r2;
    double im = -t.a * y / r2;
    if (!t.levy.empty()) {
        re += integrate_finite(t.levy, ReFKernel{x, y}, reltol);
        im -= y * integrate_finite(t.levy, AKernel{x, y}, reltol);
    }
    return {re, im};
}

cplx phi(const MeasureModel& m, UpperHalfPoint z, const EvalContext& ctx) {
    if (uses_triplet(m, ctx)) return phi_triplet(*m.triplet, z.z(), ctx.reltol);
    return m.closed_phi(z.z());
}

cplx cumulant_transform(const MeasureModel& m, cplx w, const EvalContext& ctx) {
    if (!(w.imag() < 0.0)) throw InvalidParams("transforms: cumulant transform needs Im w < 0");
    const cplx z = 1.0 / w;
    return w * phi(m, UpperHalfPoint(z.real(), z.imag()), ctx);
}

cplx f_inverse(const MeasureModel& m, double s, UpperHalfPoint z, const EvalContext& ctx) {
    if (!(s > 0.0)) throw InvalidParams("transforms: time s must be positive");
    return z.z() + s * phi(m, z, ctx);
}

double b_value(const MeasureModel& m, double x, double y, const EvalContext& ctx) {
    if (!(y > 0.0)) throw InvalidParams("transforms: b_value needs y > 0");
    if (uses_triplet(m, ctx)) {
        const FreeTriplet& t = *m.triplet;
        double b = t.a / (x * x + y * y);
        if (!t.levy.empty()) b += integrate(t.levy, AKernel{x, y}, ctx.reltol).value();
        return b;
    }
    return -m.closed_phi({x, y}).imag() / y;
}

cplx reference_cauchy(const MeasureModel& m, UpperHalfPoint z) {
    if (!m.reference_cauchy)
        throw UnknownReference("transforms: no closed-form Cauchy transform for '" + m.name + "'");
    return m.reference_cauchy(z.z());
}

cplx sqrt_quadratic(cplx z, cplx r1, cplx r2) {
    return std::sqrt(z - r1) * std::sqrt(z - r2);
}

}  // namespace freelevy
