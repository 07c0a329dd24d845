#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "magphase/quadrature.hpp"
#include "magphase/vec3.hpp"

namespace magphase {

// Spatially uniform z-aligned field amplitude as a function of time.
// Profiles are supplied by name through the CLI; the table profile is
// linearly interpolated with clamped ends.
class FieldProfile {
  public:
    static FieldProfile constant(double amplitude);
    // amplitude * sin(2 pi t / period + phase)
    static FieldProfile sinusoid(double amplitude, double period, double phase = 0.0);
    // amplitude * exp(-(t - center)^2 / tau^2)
    static FieldProfile gaussian(double amplitude, double tau, double center = 0.0);
    // Piecewise-linear through (t, B) samples sorted by t; constant
    // extension outside the sampled range.
    static FieldProfile table(std::vector<std::pair<double, double>> samples);

    double operator()(double t) const { return eval_(t); }
    const std::string& name() const { return name_; }

  private:
    FieldProfile(std::string name, std::function<double(double)> eval)
        : name_(std::move(name)), eval_(std::move(eval)) {}

    std::string name_;
    std::function<double(double)> eval_;
};

// One neutron traversal: moment and velocity both along z, field
// profile B(t) over the finite window [t_start, t_end].
struct NeutronRun {
    double moment;
    double speed;
    FieldProfile field_profile;
    double t_start;
    double t_end;

    NeutronRun(double moment_, double speed_, FieldProfile profile_, double t_start_, double t_end_);
};

// Phase accumulated through the moment-field coupling: the integral of
// moment * B(t) over the run.  The kinetic term is field-independent
// and drops out of any phase difference, so it is not integrated.
// Non-convergence is reported through the converged flag.
QuadResult neutron_phase(const NeutronRun& run,
                         double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Truncated-cylinder check that the moving neutron drives no net EMF
// around the solenoid: the surface rho = solenoid_radius,
// |z| <= half_length, probed by a neutron dipole moving along z.
// phi_samples fixes the periodic angular grid; z is integrated
// adaptively.
struct EMFCheck {
    double solenoid_radius = 1.0;
    double half_length = 10.0;
    Vec3 neutron_position{0.5, 0.0, 0.5};
    Vec3 neutron_moment{0.0, 0.0, 1.0};
    Vec3 neutron_velocity{0.0, 0.0, 0.01};
    int phi_samples = 64;
    QuadResult emf_value;
};

// Surface integral of the azimuthal electric field of the moving
// dipole over the truncated cylinder; tends to zero as half_length
// grows, which is the point being verified.
QuadResult emf_on_solenoid(const EMFCheck& chk);

// The same integral computed both ways: directly from the motional
// electric field, and as -v times the radial magnetic flux through
// the side wall.  abs_scale is the integral of |E_phi| over the
// surface, the natural yardstick for how completely the two routes
// agree.
struct GaussCheck {
    double surface_E = 0.0;
    double surface_Br = 0.0;
    double abs_scale = 0.0;
};

GaussCheck emf_gauss_check(const EMFCheck& chk);

// Net magnetic flux through the closed truncated cylinder (side wall
// plus both end caps); zero for any divergence-free field, up to
// quadrature error.
QuadResult closed_surface_B_flux(const EMFCheck& chk);

}  // namespace magphase
