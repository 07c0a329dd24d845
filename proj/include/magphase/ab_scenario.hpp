#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "magphase/fields.hpp"
#include "magphase/quadrature.hpp"
#include "magphase/vec3.hpp"

namespace magphase {

enum class PathSide { left, right };

enum class ActionMethod { flux_string, lattice_potential_picture, lattice_field_picture };

// Geometry of the two-path experiment: straight trajectories along
// x = +impact (right) and x = -impact (left) at z = 0, traversed in +y
// with the given speed.  y_start/y_end may be infinite, in which case
// the action integrals run over the whole line.
struct ABGeometry {
    FluxString magnet;
    double impact;
    double y_start;
    double y_end;
    double speed;
    double charge;

    ABGeometry(FluxString magnet_, double impact_, double y_start_, double y_end_,
               double speed_, double charge_)
        : magnet(magnet_),
          impact(impact_),
          y_start(y_start_),
          y_end(y_end_),
          speed(speed_),
          charge(charge_) {
        if (!(impact > magnet.radius)) {
            throw std::invalid_argument("ABGeometry requires impact > magnet radius (paths outside the magnet)");
        }
        if (!(y_start < 0.0) || !(y_end > 0.0)) {
            throw std::invalid_argument("ABGeometry requires y_start < 0 < y_end");
        }
        if (!(speed > 0.0) || !(speed < 0.1)) {
            throw std::invalid_argument("ABGeometry requires speed in (0, 0.1)");
        }
        if (!std::isfinite(charge)) {
            throw std::invalid_argument("ABGeometry requires finite charge");
        }
    }
};

struct LatticeCounts {
    int n_z = 1;
    int n_r = 1;
    int n_phi = 1;
};

// Finite cylindrical magnet discretized into point dipoles of equal
// moment on a cylindrical grid.
struct DipoleLattice {
    std::vector<MagneticDipole> cells;
    double magnet_radius = 0.0;
    double half_length = 0.0;
    LatticeCounts cell_counts;
    // Largest in-plane cell dimension (radial width or arc length);
    // paths must keep at least this distance from every cell centroid.
    double max_transverse_extent = 0.0;

    Vec3 total_moment() const {
        Vec3 sum;
        for (const auto& c : cells) sum += c.moment;
        return sum;
    }
};

struct ActionReport {
    double delta_I = 0.0;
    QuadResult left;
    QuadResult right;
    ActionMethod method = ActionMethod::flux_string;
};

struct ScreenSample {
    double x = 0.0;
    double intensity = 0.0;
};

struct PairIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
};

struct InertnessBound {
    double field_ratio = 0.0;
    double transition_probability = 0.0;
    double aggregate = 0.0;
};

// charge * integral of A_y along the straight path x = +/-impact, z = 0;
// improper quadrature when the y range is unbounded.  For the right
// path this is one half of the enclosed-flux action difference.
QuadResult action_along_path(const ABGeometry& g, PathSide side,
                             double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Action difference right - left around the flux string; equals
// charge * flux up to quadrature error.
ActionReport ab_action_difference(const ABGeometry& g,
                                  double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol);

// Two-beam screen intensity for unit-amplitude subpackets:
// 2 * (1 + cos(2 pi x / fringe_scale + delta_phase)).  The enclosed-flux
// phase rigidly translates the fringe pattern.
std::vector<ScreenSample> interference_pattern(double delta_phase, const std::vector<double>& screen_xs,
                                               double fringe_scale);

// Both sides of the pairwise interaction identity: the charge's field
// at the dipole dotted with the moment, against charge times velocity
// dotted with the dipole's potential at the charge.  The two are equal
// analytically; both are returned for numerical comparison.
PairIdentity pair_identity_check(const MovingCharge& c, const MagneticDipole& d);

// Uniformly magnetized cylinder (flux / (4 pi^2 radius^2) along z) cut
// into n_z slabs, n_r equal-area radial shells and n_phi angular
// sectors; every cell carries the same moment at its centroid.  With a
// single angular sector the in-plane centroid of a full annulus is the
// axis, so those cells sit at rho = 0.
DipoleLattice build_lattice(double radius, double half_length, double flux, int n_z, int n_r, int n_phi);

// Interaction per unit path length at height y of the given side, i.e.
// the integrand of the lattice action integrals.  The potential form
// sums the cells' vector potentials at the charge; the field form sums
// the charge's magnetic field dotted with each cell moment (divided by
// speed to convert the time integrand to a path-length integrand).
// Equal analytically; exposed separately so tests can compare them
// pointwise.
double lattice_potential_integrand(const DipoleLattice& lat, const ABGeometry& g, PathSide side, double y);
double lattice_field_integrand(const DipoleLattice& lat, const ABGeometry& g, PathSide side, double y);

// Action difference over the lattice in the potential picture
// (charge * velocity . sum of cell potentials).  Infinite path ends are
// clamped to +/-10 half_length; the analytically bounded tail is folded
// into the error estimate.  workers > 1 splits the cell sum into that
// many fixed contiguous chunks evaluated concurrently; results depend
// on the chunk count only through reassociation of the partial sums.
ActionReport lattice_action_potential_picture(const DipoleLattice& lat, const ABGeometry& g, int workers = 1);

// Same action difference summed at the dipoles instead (charge field
// dotted with each moment, integrated over time).  Matches the
// potential picture pointwise, hence to tight relative tolerance.
ActionReport lattice_action_field_picture(const DipoleLattice& lat, const ABGeometry& g, int workers = 1);

// Scaling bounds for the rigidity of the magnet's microscopic state:
// ratio of the field the probe exerts at an atom to the atom's own
// internal field scale, the induced transition probability (its
// square), and the aggregate over n_atoms atoms.
InertnessBound inertness_bound(double atomic_distance, double electron_distance, double n_atoms = 1e12);

}  // namespace magphase
