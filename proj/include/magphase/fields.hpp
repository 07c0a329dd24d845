#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "magphase/quadrature.hpp"
#include "magphase/vec3.hpp"

namespace magphase {

// Natural units with c = hbar = 1 everywhere; fields are kept to first
// order in the source velocity and the electron charge is carried with
// its negative numerical value by the callers.

// Field evaluation closer than this to a point source is refused
// rather than extrapolated; scenario geometry keeps separations of
// order one.
inline constexpr double kSingularDistance = 1e-9;

struct MagneticDipole {
    Vec3 moment;
    Vec3 position;
};

struct MovingCharge {
    double charge = 0.0;
    Vec3 velocity;
    Vec3 position;

    MovingCharge(double charge_, Vec3 velocity_, Vec3 position_ = {})
        : charge(charge_), velocity(velocity_), position(position_) {
        if (!std::isfinite(charge) || !finite(velocity) || !finite(position)) {
            throw std::invalid_argument("MovingCharge requires finite charge, velocity and position");
        }
        if (!(velocity.norm() < 0.1)) {
            throw std::invalid_argument("MovingCharge velocity must satisfy |v| < 0.1 (nonrelativistic contract)");
        }
    }
};

// Idealized infinite solenoid of given radius carrying total flux; the
// axis is fixed to z.
struct FluxString {
    double radius = 0.0;
    double flux = 0.0;

    FluxString(double radius_, double flux_) : radius(radius_), flux(flux_) {
        if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(flux)) {
            throw std::invalid_argument("FluxString requires radius > 0 and finite flux");
        }
    }
};

namespace detail {
[[noreturn]] void throw_singular(const Vec3& s);
}

// B = [3(m.s)s - s^2 m] / |s|^5 at displacement s = r - position.
inline Vec3 dipole_B(const MagneticDipole& d, const Vec3& r) {
    const Vec3 s = r - d.position;
    const double s2 = s.norm2();
    if (!(s2 > kSingularDistance * kSingularDistance)) detail::throw_singular(s);
    const double inv_s2 = 1.0 / s2;
    const double inv_s3 = inv_s2 / std::sqrt(s2);
    return (s * (3.0 * dot(d.moment, s) * inv_s2) - d.moment) * inv_s3;
}

// A = (m x s) / |s|^3; for m along z this is the azimuthal
// m sin(theta) / r^2 potential.
inline Vec3 dipole_A(const MagneticDipole& d, const Vec3& r) {
    const Vec3 s = r - d.position;
    const double s2 = s.norm2();
    if (!(s2 > kSingularDistance * kSingularDistance)) detail::throw_singular(s);
    const double inv_s3 = 1.0 / (s2 * std::sqrt(s2));
    return cross(d.moment, s) * inv_s3;
}

// Coulomb field to order v^0: E = q s / |s|^3.
inline Vec3 charge_E(const MovingCharge& c, const Vec3& r) {
    const Vec3 s = r - c.position;
    const double s2 = s.norm2();
    if (!(s2 > kSingularDistance * kSingularDistance)) detail::throw_singular(s);
    const double inv_s3 = 1.0 / (s2 * std::sqrt(s2));
    return s * (c.charge * inv_s3);
}

// Magnetic field of the moving charge to first order: B = v x E.
inline Vec3 charge_B(const MovingCharge& c, const Vec3& r) {
    return cross(c.velocity, charge_E(c, r));
}

// Electric field seen in the frame where a magnetic dipole moves with
// velocity v: E = -v x B, first order in v.
inline Vec3 moving_dipole_E(const MagneticDipole& d, const Vec3& v, const Vec3& r) {
    return -cross(v, dipole_B(d, r));
}

// Exterior vector potential of the flux string: A_phi = flux / (2 pi rho),
// i.e. (-y, x, 0) * flux / (2 pi rho^2).  Defined only outside the
// string radius.
Vec3 fluxstring_A(const FluxString& s, const Vec3& r);

using VectorField = std::function<Vec3(const Vec3&)>;

// Line integral of A . dl along the straight segment from `from` to `to`.
QuadResult line_integral(const VectorField& field, const Vec3& from, const Vec3& to,
                         double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Circulation around the closed polygon through the given vertices (the
// closing edge back to the first vertex is implied).  Requires at least
// three vertices.
QuadResult loop_circulation(const VectorField& field, const std::vector<Vec3>& vertices,
                            double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

}  // namespace magphase
