#pragma once

#include <functional>

namespace magphase {

// Outcome of an adaptive quadrature run.  `value` is the accumulated
// integral, `error_estimate` the sum of per-interval estimates derived
// from the difference between the nested 7-point Gauss and 15-point
// Kronrod rules.  `converged` reports whether the requested tolerance
// was met before the evaluation budget ran out; the integrators never
// abort on a slow integrand, they return the best result with
// converged = false.
struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long long evaluations = 0;
    bool converged = false;
};

inline constexpr double kDefaultRelTol = 1e-9;
inline constexpr double kDefaultAbsTol = 1e-12;
inline constexpr long long kDefaultMaxEvals = 1'000'000;

// Globally adaptive Gauss-Kronrod integration of f over the finite
// interval [a, b].  The interval with the largest local error estimate
// is bisected first; the loop stops once the total estimate drops below
// max(abs_tol, rel_tol * |value|) or the evaluation budget is reached.
// Requires a <= b and finite endpoints.  Throws std::invalid_argument
// on a bad interval or non-positive tolerances, and std::domain_error
// (with the offending abscissa in the message) when the integrand
// returns a non-finite value.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol,
                              long long max_evals = kDefaultMaxEvals);

// Integral of f over the whole real line via the substitution
// y = tan(u), du-weighted by 1 + tan(u)^2, mapped to the open interval
// (-pi/2, pi/2).  The Gauss-Kronrod abscissas never touch the interval
// endpoints, so f is only evaluated at finite arguments.  The caller
// is responsible for supplying an integrand that decays at least as
// fast as |y|^-2; slower decay shows up as converged = false.
QuadResult integrate_improper(const std::function<double(double)>& f,
                              double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol,
                              long long max_evals = kDefaultMaxEvals);

// Integral of f over [a, b] where either endpoint may be infinite;
// dispatches to integrate_adaptive for finite intervals and applies
// the tangent substitution to any unbounded end.  Requires a < b in
// the extended reals.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol,
                              long long max_evals = kDefaultMaxEvals);

}  // namespace magphase
