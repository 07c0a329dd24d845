#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magphase/ab_scenario.hpp"
#include "magphase/fields.hpp"
#include "magphase/quadrature.hpp"

namespace magphase {

// Frictionless charged-liquid solenoid: current_density is loops per
// unit length times current, liquid_mass and initial_speed describe
// the circulating liquid.  The device's response to a passing charge
// enters the action only through its kinetic-energy change, so the
// mass and speed are carried for reporting and never used in the
// integrals.
struct ClassicalSolenoid {
    double radius;
    double current_density;
    double liquid_mass;
    double initial_speed;

    ClassicalSolenoid(double radius_, double current_density_, double liquid_mass_ = 1.0,
                      double initial_speed_ = 0.0)
        : radius(radius_),
          current_density(current_density_),
          liquid_mass(liquid_mass_),
          initial_speed(initial_speed_) {
        if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(current_density)) {
            throw std::invalid_argument("ClassicalSolenoid requires radius > 0 and finite current density");
        }
        if (!(liquid_mass > 0.0)) {
            throw std::invalid_argument("ClassicalSolenoid requires liquid_mass > 0");
        }
    }

    // Total flux 4 pi^2 radius^2 current_density, exact closed form.
    double flux() const {
        constexpr double pi = std::numbers::pi;
        return 4.0 * pi * pi * radius * radius * current_density;
    }
};

struct CancellationReport {
    double delta_I1 = 0.0;
    double delta_I2 = 0.0;
    double total = 0.0;
    double flux = 0.0;
};

// Closed-form results below assume the thin-solenoid regime, where the
// probe's field is uniform over the cross-section.  This predicate
// documents the contract; the operations do not enforce it, since the
// error grows smoothly (as (radius/impact)^2) rather than abruptly.
inline bool thin_regime(const ClassicalSolenoid& s, const ABGeometry& g) {
    return s.radius / g.impact <= 0.05;
}

// Probe action gained along the right-hand path around the solenoid
// treated as a flux string: charge * flux / 2 for an infinite path.
QuadResult delta_I1(const ClassicalSolenoid& s, const ABGeometry& g,
                    double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Axial magnetic field of the probe charge at displacement
// (impact, y_rel, z) from it: speed * impact * charge / |s|^3, the
// z-component of velocity cross the Coulomb field.
double electron_Bz_at(double y_rel, double z, const ABGeometry& g);

// Kinetic-energy change of the solenoid liquid when the probe sits at
// y: -2 pi radius^2 impact speed charge current_density /
// (impact^2 + y^2), the closed form of the z-integrated coupling.
double delta_W_thin(const ClassicalSolenoid& s, const ABGeometry& g, double y);

// Same quantity by explicit quadrature: minus current_density times
// the probe flux through the solenoid, integrating the axial-field
// kernel over z with the cross-section area factored out.
QuadResult delta_W_numeric(const ClassicalSolenoid& s, const ABGeometry& g, double y,
                           double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Device action response: time integral of delta_W_thin over the
// passage, using v dt = dy; equals -charge * flux / 2 regardless of
// the impact parameter.
QuadResult delta_I2(const ClassicalSolenoid& s, const ABGeometry& g,
                    double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Both action contributions and their sum; the sum vanishes up to
// quadrature error, which is the device's whole point.
CancellationReport cancellation(const ClassicalSolenoid& s, const ABGeometry& g,
                                double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Thick solenoid as n_shells concentric thin shells of radius
// radius*k/n_shells each carrying current density j/n_shells; sums the
// per-shell responses.  Equals -charge/2 times the summed shell flux.
QuadResult thick_solenoid_delta_I2(const ClassicalSolenoid& s, const ABGeometry& g, int n_shells,
                                   double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

}  // namespace magphase
