#include "magphase/classical_device.hpp"

#include <numbers>

namespace magphase {
namespace {

constexpr double kPi = std::numbers::pi;

ABGeometry with_solenoid(const ClassicalSolenoid& s, const ABGeometry& g) {
    return ABGeometry{FluxString{s.radius, s.flux()}, g.impact, g.y_start, g.y_end, g.speed,
                      g.charge};
}

}  // namespace

QuadResult delta_I1(const ClassicalSolenoid& s, const ABGeometry& g, double rel_tol,
                    double abs_tol) {
    return action_along_path(with_solenoid(s, g), PathSide::right, rel_tol, abs_tol);
}

double electron_Bz_at(double y_rel, double z, const ABGeometry& g) {
    const double a = g.impact;
    const double d2 = a * a + y_rel * y_rel + z * z;
    if (!(d2 > kSingularDistance * kSingularDistance)) {
        throw std::domain_error("axial-field kernel evaluated at zero separation from the probe");
    }
    return g.speed * a * g.charge / (d2 * std::sqrt(d2));
}

double delta_W_thin(const ClassicalSolenoid& s, const ABGeometry& g, double y) {
    const double a = g.impact;
    return -2.0 * kPi * s.radius * s.radius * a * g.speed * g.charge * s.current_density /
           (a * a + y * y);
}

QuadResult delta_W_numeric(const ClassicalSolenoid& s, const ABGeometry& g, double y,
                           double rel_tol, double abs_tol) {
    const double area = kPi * s.radius * s.radius;
    auto kernel = [&g, y](double z) { return electron_Bz_at(y, z, g); };
    QuadResult q = integrate_improper(kernel, rel_tol, abs_tol);
    q.value *= -s.current_density * area;
    q.error_estimate *= std::fabs(s.current_density) * area;
    return q;
}

QuadResult delta_I2(const ClassicalSolenoid& s, const ABGeometry& g, double rel_tol,
                    double abs_tol) {
    // v dt = dy turns the time integral of the energy change into a
    // spatial one; the 1/v makes the result speed-independent.
    auto integrand = [&s, &g](double y) { return delta_W_thin(s, g, y) / g.speed; };
    return integrate_interval(integrand, g.y_start, g.y_end, rel_tol, abs_tol);
}

CancellationReport cancellation(const ClassicalSolenoid& s, const ABGeometry& g, double rel_tol,
                                double abs_tol) {
    CancellationReport report;
    report.delta_I1 = delta_I1(s, g, rel_tol, abs_tol).value;
    report.delta_I2 = delta_I2(s, g, rel_tol, abs_tol).value;
    report.total = report.delta_I1 + report.delta_I2;
    report.flux = s.flux();
    return report;
}

QuadResult thick_solenoid_delta_I2(const ClassicalSolenoid& s, const ABGeometry& g, int n_shells,
                                   double rel_tol, double abs_tol) {
    if (n_shells < 1) {
        throw std::invalid_argument("thick_solenoid_delta_I2 requires n_shells >= 1");
    }
    if (!(g.impact > s.radius)) {
        throw std::invalid_argument("thick_solenoid_delta_I2 requires impact > solenoid radius");
    }
    QuadResult total;
    total.converged = true;
    for (int k = 1; k <= n_shells; ++k) {
        const double r_k = s.radius * static_cast<double>(k) / n_shells;
        const ClassicalSolenoid shell{r_k, s.current_density / n_shells, s.liquid_mass,
                                      s.initial_speed};
        const QuadResult part = delta_I2(shell, g, rel_tol, abs_tol);
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.evaluations += part.evaluations;
        total.converged = total.converged && part.converged;
    }
    return total;
}

}  // namespace magphase
