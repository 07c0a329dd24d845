#include "magphase/fields.hpp"

#include <cstdio>
#include <numbers>
#include <string>

namespace magphase {

namespace detail {

[[noreturn]] void throw_singular(const Vec3& s) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "(%.6g, %.6g, %.6g)", s.x, s.y, s.z);
    throw std::domain_error(std::string("field evaluated within the singular distance of a source; displacement ") + buf);
}

}  // namespace detail

Vec3 fluxstring_A(const FluxString& s, const Vec3& r) {
    const double rho2 = r.x * r.x + r.y * r.y;
    if (!(rho2 > s.radius * s.radius)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "rho = %.6g, radius = %.6g", std::sqrt(rho2), s.radius);
        throw std::domain_error(std::string("flux-string potential requested inside the string; ") + buf);
    }
    const double scale = s.flux / (2.0 * std::numbers::pi * rho2);
    return {-r.y * scale, r.x * scale, 0.0};
}

QuadResult line_integral(const VectorField& field, const Vec3& from, const Vec3& to,
                         double rel_tol, double abs_tol) {
    const Vec3 delta = to - from;
    auto integrand = [&](double t) { return dot(field(from + delta * t), delta); };
    return integrate_adaptive(integrand, 0.0, 1.0, rel_tol, abs_tol);
}

QuadResult loop_circulation(const VectorField& field, const std::vector<Vec3>& vertices,
                            double rel_tol, double abs_tol) {
    if (vertices.size() < 3) {
        throw std::invalid_argument("loop_circulation requires at least three vertices");
    }
    QuadResult total;
    total.converged = true;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vec3& from = vertices[i];
        const Vec3& to = vertices[(i + 1) % vertices.size()];
        const QuadResult leg = line_integral(field, from, to, rel_tol, abs_tol);
        total.value += leg.value;
        total.error_estimate += leg.error_estimate;
        total.evaluations += leg.evaluations;
        total.converged = total.converged && leg.converged;
    }
    return total;
}

}  // namespace magphase
