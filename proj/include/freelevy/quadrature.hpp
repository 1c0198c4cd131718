#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

#include "freelevy/extended_real.hpp"
#include "freelevy/measure_model.hpp"

namespace freelevy {

// t^2 / ((x-t)^2 + y^2)
struct AKernel {
    double x;
    double y;
};
// t^2 (x-t) / ((x-t)^2 + y^2) + t 1{|t|>1}
struct ReFKernel {
    double x;
    double y;
};
struct SquareKernel {};
struct MassKernel {};
// t^2 / (t^2 + y^2)
struct ImBoundaryKernel {
    double y;
};
// t y^2 / (t^2 + y^2) - t 1{|t|<=1}
struct ReBoundaryKernel {
    double y;
};
// min(1, t^2)
struct Min1SquareKernel {};
// Bounded continuous function that vanishes on a neighbourhood of 0.
struct CustomKernel {
    RealFn f;
};

using Kernel = std::variant<AKernel, ReFKernel, SquareKernel, MassKernel, ImBoundaryKernel,
                            ReBoundaryKernel, Min1SquareKernel, CustomKernel>;

struct QuadratureOptions {
    double reltol = default_reltol;
    std::size_t max_panels = std::size_t{1} << 16;
    bool endpoint_substitution = true;
};

// Integral of the kernel against nu. Atoms are summed exactly. Returns +infinity
// when the exponent hints show a nonnegative kernel is not integrable.
ExtendedReal integrate(const LevyMeasure& nu, const Kernel& k, double reltol = default_reltol);
ExtendedReal integrate(const LevyMeasure& nu, const Kernel& k, const QuadratureOptions& opt);

// Convenience for finite results; throws DivergentCompensator on an infinite value.
double integrate_finite(const LevyMeasure& nu, const Kernel& k, double reltol = default_reltol);

// Adaptive Gauss-Kronrod on a finite interval for a smooth integrand.
double integrate_interval(const RealFn& g, double a, double b, double reltol,
                          std::size_t max_panels = std::size_t{1} << 14);

struct QuadratureStats {
    std::uint64_t integrals = 0;
    std::uint64_t panels = 0;
    double worst_error = 0.0;  // worst achieved relative error estimate
};

QuadratureStats quadrature_stats();
void reset_quadrature_stats();

}  // namespace freelevy
