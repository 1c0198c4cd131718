#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "freelevy/extended_real.hpp"

namespace freelevy {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(cplx)>;

constexpr double default_reltol = 1e-10;

struct LevyAtom {
    double location = 0.0;
    double weight = 0.0;
};

// Absolutely continuous part of a Levy measure on the open interval (left, right).
// zero_exponent beta: density = O(|t|^-beta) near 0 when 0 is in the closure of the support.
// tail_exponent alpha: density = O(|t|^(-1-alpha)) at infinity when the support is unbounded.
struct DensityPiece {
    RealFn density;
    double left = 0.0;
    double right = 0.0;
    double zero_exponent = 0.0;
    double tail_exponent = 1.0;

    bool touches_zero() const { return left <= 0.0 && right >= 0.0; }
    bool unbounded() const;
};

struct LevyMeasure {
    std::vector<LevyAtom> atoms;
    std::vector<DensityPiece> pieces;
    bool symmetric = false;

    bool empty() const { return atoms.empty() && pieces.empty(); }
    double density(double t) const;  // sum of piece densities at t
};

struct FreeTriplet {
    double eta = 0.0;
    double a = 0.0;
    LevyMeasure levy;

    bool is_point_mass() const { return a == 0.0 && levy.empty(); }
};

struct MeasureModel {
    std::string name;
    std::optional<FreeTriplet> triplet;
    ComplexFn closed_phi;
    RealFn reference_density;   // density of the law at time 1
    ComplexFn reference_cauchy;  // Cauchy transform of the law at time 1

    bool has_triplet() const { return triplet.has_value(); }
    bool has_closed_phi() const { return static_cast<bool>(closed_phi); }
    bool symmetric() const { return triplet && triplet->levy.symmetric && triplet->eta == 0.0; }
};

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double integrability = 0.0;  // integral of min(1, t^2) against the Levy measure
    bool point_mass = false;
    bool passed() const;
};

ValidationReport validate(const MeasureModel& m, double reltol = default_reltol);

ExtendedReal total_mass(const LevyMeasure& nu, double reltol = default_reltol);
ExtendedReal second_moment(const LevyMeasure& nu, double a, double reltol = default_reltol);
double shift_constant(const FreeTriplet& t, double reltol = default_reltol);
ExtendedReal support_radius(const LevyMeasure& nu);

// Numerical symmetry check: atoms mirrored and piece densities equal at +-t within 1e-10.
bool check_symmetry(const LevyMeasure& nu);

LevyMeasure merge(const LevyMeasure& a, const LevyMeasure& b);
FreeTriplet scale_triplet(const FreeTriplet& t, double s);

}  // namespace freelevy
