#pragma once

#include <cstddef>
#include <vector>

#include "freelevy/extended_real.hpp"
#include "freelevy/measure_model.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {

// One law of the semigroup: model at time s together with the numerical scale.
struct Problem {
    const MeasureModel* model = nullptr;
    double s = 1.0;
    EvalContext ctx;
    double scale = 1.0;
    double y_floor = 1e-12;
};

// scale = max(1, sqrt(s * second moment)) when finite, otherwise scale_override (or 1).
Problem make_problem(const MeasureModel& m, double s, const EvalContext& ctx = {}, double scale_override = 0.0);
// Problem keeps a pointer to the model, so temporaries are rejected.
Problem make_problem(MeasureModel&&, double, const EvalContext& = {}, double = 0.0) = delete;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct Window {
    bool automatic = true;
    double lo = 0.0;
    double hi = 0.0;
    static Window autodetect() { return {}; }
    static Window fixed(double lo, double hi) { return {false, lo, hi}; }
};

struct AtomRecord {
    bool present = false;
    double location = 0.0;
    double mass = 0.0;
};

enum class ClassTag { ContinuousDensityOnR, AbsolutelyContinuousOnly, AtomPlusAC, PointMass };

struct Classification {
    ClassTag tag = ClassTag::ContinuousDensityOnR;
    AtomRecord atom;         // AtomPlusAC and PointMass
    ExtendedReal s_nu_mass;  // s * nu(R)
    double s_a = 0.0;
};

const char* to_string(ClassTag t);

struct PointEval {
    double x = 0.0;
    double v = 0.0;
    double psi = 0.0;
    double f = 0.0;
    bool defined = true;  // false when x = 0 and v = 0 (density undefined there)
};

double v_of_x(const Problem& p, double x);
double psi_of_x(const Problem& p, double x);
double density_at(const Problem& p, double x);
PointEval evaluate_point(const Problem& p, double x);
bool in_support_set(const Problem& p, double x);  // v(x) > 0

AtomRecord detect_atom(const Problem& p);
AtomRecord detect_atom_triplet(const Problem& p);
AtomRecord detect_atom_limit(const Problem& p);
Classification classify(const Problem& p);

Interval resolve_window(const Problem& p, const Window& w);

// Connected component of {v > 0} in the x-parameter; *_edge is true where v vanishes
// (a genuine boundary) and false where the window cuts the component.
struct XComponent {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_edge = false;
    bool hi_edge = false;
};

std::vector<XComponent> x_components(const Problem& p, Interval window, int probes = 512);

// Two x-components separated by a gap narrower than this (relative to scale) touch in psi-space.
constexpr double degenerate_gap = 1e-8;

// True when the gap (a, b) between two x-components is an artefact of the y floor: either it is
// narrower than degenerate_gap * scale, or the Levy density is positive throughout it apart from
// t = 0, in which case v vanishes at most at the single point 0.
bool gap_is_degenerate(const Problem& p, double a, double b);

struct CurveSample {
    double x = 0.0;
    double v = 0.0;
    double psi = 0.0;
    double f = 0.0;
};

struct CurveComponent {
    XComponent range;
    double psi_lo = 0.0;
    double psi_hi = 0.0;
    std::vector<double> tau;        // parametrisation of the samples in [0, 1]
    std::vector<CurveSample> samples;
    std::vector<bool> defined;      // density defined at the sample
    double regular_max_f = 0.0;     // max f away from the edge refinement zones
    bool joins_next = false;        // degenerate gap to the next component
};

struct DensityCurve {
    double s = 1.0;
    double scale = 1.0;
    Interval window;
    std::vector<CurveComponent> components;
    double tail_lower = 0.0;  // mass of the law below the window image, excluding the atom
    double tail_upper = 0.0;

    std::vector<CurveSample> samples() const;  // defined samples in strictly increasing x
    double regular_max_f() const;
};

DensityCurve density_curve(const Problem& p, const Window& w, int n = 512);

// Mass of the law in (psi(x), infinity) from boundary values of the inverse transform.
double upper_tail_mass(const Problem& p, double x);

struct SupportReport {
    std::vector<Interval> psi_intervals;
    std::vector<Interval> x_intervals;
    AtomRecord atom;
    std::size_t count() const { return psi_intervals.size(); }
};

SupportReport support_components(const Problem& p, const Window& w, int probes = 512);

}  // namespace freelevy
