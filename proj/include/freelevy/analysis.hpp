#pragma once

#include <string>
#include <vector>

#include "freelevy/extended_real.hpp"
#include "freelevy/inversion.hpp"

namespace freelevy {

struct Mode {
    double psi = 0.0;
    double height = 0.0;  // +infinity for the atom
    double x = 0.0;
    bool atom = false;
};

struct ModeReport {
    double s = 1.0;
    std::vector<Interval> components;  // psi-intervals after merging degenerate gaps
    std::vector<Mode> modes;
    AtomRecord atom;
    bool unimodal = false;
    std::string reason;
};

// Local maxima of the sampled density across components, with the atom treated as an
// infinite spike. With a problem, interior maxima are refined on density_at.
ModeReport count_modes(const DensityCurve& curve, const AtomRecord& atom, const Problem* refine = nullptr);

ModeReport is_unimodal(const Problem& p, const Window& w, int n = 512);

struct ThetaScan {
    double R = 1.0;
    std::vector<double> thetas;
    std::vector<double> values;
};

// A_nu(R sin(theta) e^{i theta}) on theta_k = pi k / (n + 1), k = 1..n.
ThetaScan theta_scan(const LevyMeasure& nu, double R, int n, double reltol = default_reltol);

// Number of sign changes of the finite differences, ignoring steps below slack * max |value|.
// first_sign receives the sign of the first significant step (0 when there is none).
int sign_changes(const std::vector<double>& values, double slack = 1e-9, int* first_sign = nullptr);

// 4 M^2 / sigma^2; +infinity for unbounded support, 0 when the Levy measure vanishes.
ExtendedReal unimodality_threshold(const FreeTriplet& t, double reltol = default_reltol);

struct ClassMembership {
    bool jurek = false;
    bool selfdecomposable = false;
};

ClassMembership class_membership(const LevyMeasure& nu, int grid = 4000);

// (1/t) [atom mass * f(atom) + integral of f against the density of the law at time t].
double small_time_functional(const MeasureModel& m, const RealFn& f, double t, const Window& w,
                             const EvalContext& ctx = {}, int n = 512);

}  // namespace freelevy
