#pragma once

#include "freelevy/measure_model.hpp"

namespace freelevy {

enum class EvalPath { Auto, Triplet, Closed };

struct EvalContext {
    double reltol = default_reltol;
    EvalPath path = EvalPath::Auto;  // Auto prefers the triplet when present
};

struct UpperHalfPoint {
    double x;
    double y;
    UpperHalfPoint(double x_, double y_);
    cplx z() const { return {x, y}; }
};

cplx phi_triplet(const FreeTriplet& t, cplx z, double reltol = default_reltol);
cplx phi(const MeasureModel& m, UpperHalfPoint z, const EvalContext& ctx = {});

// C(w) = w phi(1/w) for w in the lower half-plane.
cplx cumulant_transform(const MeasureModel& m, cplx w, const EvalContext& ctx = {});

// Inverse reciprocal Cauchy transform of the law at time s: z + s phi(z).
cplx f_inverse(const MeasureModel& m, double s, UpperHalfPoint z, const EvalContext& ctx = {});

// -Im phi(x+iy)/y = a/(x^2+y^2) + A_nu(x+iy).
double b_value(const MeasureModel& m, double x, double y, const EvalContext& ctx = {});

// Closed-form Cauchy transform attached to the model; throws UnknownReference if absent.
cplx reference_cauchy(const MeasureModel& m, UpperHalfPoint z);

// Principal square root of (z - r1)(z - r2) continued from z = +i infinity, for roots
// in the closed lower half-plane: the branch of sqrt that is analytic on the upper half-plane
// and behaves like z at infinity.
cplx sqrt_quadratic(cplx z, cplx r1, cplx r2);

bool uses_triplet(const MeasureModel& m, const EvalContext& ctx);

}  // namespace freelevy
