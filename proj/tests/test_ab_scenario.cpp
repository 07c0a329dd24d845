#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "magphase/ab_scenario.hpp"
#include "magphase/fields.hpp"
#include "magphase/quadrature.hpp"

using namespace magphase;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

ABGeometry canonical(double flux = 2.0 * kPi, double impact = 1.0, double charge = -1.0) {
    return ABGeometry{FluxString{0.1, flux}, impact, -kInf, kInf, 0.01, charge};
}

}  // namespace

TEST_SUITE("ab_scenario") {

TEST_CASE("one sided actions are half the enclosed flux each") {
    const ABGeometry g = canonical();
    const double half = g.charge * g.magnet.flux / 2.0;

    const QuadResult right = action_along_path(g, PathSide::right);
    CHECK(right.converged);
    CHECK(right.value == doctest::Approx(half).epsilon(1e-9));

    const QuadResult left = action_along_path(g, PathSide::left);
    CHECK(left.converged);
    CHECK(left.value == doctest::Approx(-half).epsilon(1e-9));
}

TEST_CASE("zero flux gives zero action on either side") {
    const ABGeometry g = canonical(0.0);
    CHECK(action_along_path(g, PathSide::right).value == 0.0);
    CHECK(action_along_path(g, PathSide::left).value == 0.0);
}

TEST_CASE("truncated path follows the arctangent closed form") {
    const ABGeometry g{FluxString{0.1, 2.0 * kPi}, 1.0, -1.0, 1.0, 0.01, -1.0};
    // A_y integrates to flux/(2 pi) * (atan(y1/a) - atan(y0/a)).
    const double expected = g.charge * g.magnet.flux / (2.0 * kPi) *
                            (std::atan(1.0 / g.impact) - std::atan(-1.0 / g.impact));
    const QuadResult right = action_along_path(g, PathSide::right);
    CHECK(right.value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(right.value == doctest::Approx(-kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("two path action difference equals charge times flux") {
    const ABGeometry g = canonical();
    const ActionReport report = ab_action_difference(g);
    CHECK(report.method == ActionMethod::flux_string);
    CHECK(report.delta_I == report.right.value - report.left.value);
    CHECK(report.delta_I == doctest::Approx(-2.0 * kPi).epsilon(1e-9));

    CHECK(ab_action_difference(canonical(0.0)).delta_I == 0.0);
}

TEST_CASE("action difference is independent of the impact parameter") {
    const double base = ab_action_difference(canonical()).delta_I;
    const double doubled = ab_action_difference(canonical(2.0 * kPi, 2.0)).delta_I;
    CHECK(doubled == doctest::Approx(base).epsilon(1e-8));
}

TEST_CASE("action difference is linear in the flux") {
    const double one = ab_action_difference(canonical(2.0 * kPi)).delta_I;
    const double two = ab_action_difference(canonical(4.0 * kPi)).delta_I;
    CHECK(two == doctest::Approx(2.0 * one).epsilon(1e-9));
}

TEST_CASE("two right hand paths enclose nothing") {
    const QuadResult inner = action_along_path(canonical(), PathSide::right);
    const QuadResult outer = action_along_path(canonical(2.0 * kPi, 3.0), PathSide::right);
    CHECK(std::fabs(inner.value - outer.value) <= 1e-8 * std::fabs(inner.value));
}

TEST_CASE("deforming an exterior path does not change the action") {
    const FluxString s{0.1, 2.0 * kPi};
    const double e = -1.0;
    const VectorField potential = [&](const Vec3& r) { return fluxstring_A(s, r); };
    const double span = 1e6;

    const QuadResult straight = line_integral(potential, {1.0, -span, 0.0}, {1.0, span, 0.0});
    CHECK(straight.converged);

    // Piecewise detour through x in [1, 6]; same endpoints, same side of
    // the string, so the same circulation-free region.
    const std::vector<Vec3> waypoints = {{1.0, -span, 0.0}, {1.0, -3.0, 0.0}, {6.0, -2.0, 0.0},
                                         {6.0, 3.0, 0.0},   {1.0, 4.0, 0.0},  {1.0, span, 0.0}};
    double deformed = 0.0;
    double error_budget = straight.error_estimate;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const QuadResult leg = line_integral(potential, waypoints[i], waypoints[i + 1]);
        CHECK(leg.converged);
        deformed += leg.value;
        error_budget += leg.error_estimate;
    }
    const double scale = std::fabs(e * s.flux);
    CHECK(std::fabs(e * straight.value - e * deformed) <= 1e-8 * scale + error_budget);
}

TEST_CASE("interference pattern basics") {
    const auto constructive = interference_pattern(0.0, {0.0}, 1.0);
    REQUIRE(constructive.size() == 1);
    CHECK(constructive[0].x == 0.0);
    CHECK(constructive[0].intensity == doctest::Approx(4.0).epsilon(1e-15));

    const auto destructive = interference_pattern(kPi, {0.0}, 1.0);
    CHECK(std::fabs(destructive[0].intensity) < 1e-12);

    CHECK_THROWS_AS(interference_pattern(0.0, {0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("enclosed flux phase translates the pattern rigidly") {
    const double fringe = 2.0;
    const double delta = -2.0 * kPi;  // charge -1 times flux 2 pi
    // The x = 0 maximum moves to -fringe * delta / (2 pi).
    const double shifted_max = -fringe * delta / (2.0 * kPi);
    const auto at_max = interference_pattern(delta, {shifted_max}, fringe);
    CHECK(at_max[0].intensity == doctest::Approx(4.0).epsilon(1e-14));

    const std::vector<double> xs = {-1.3, -0.4, 0.0, 0.7, 2.1};
    const auto moved = interference_pattern(delta, xs, fringe);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto reference =
            interference_pattern(0.0, {xs[i] + fringe * delta / (2.0 * kPi)}, fringe);
        CHECK(moved[i].intensity == doctest::Approx(reference[0].intensity).epsilon(1e-12));
    }
}

TEST_CASE("pair interaction identity at the pinned geometry") {
    const double R = 1.0, Z0 = 0.5, v = 0.01, e = -1.0, m = 1.0;
    const MovingCharge electron{e, {0.0, v, 0.0}, {R, 0.0, Z0}};
    const MagneticDipole dipole{{0.0, 0.0, m}, {0.0, 0.0, 0.0}};
    const PairIdentity id = pair_identity_check(electron, dipole);

    // Both sides must equal m e v sin(theta) cos(phi) / r^2 with the
    // electron's polar angle and phi pinned to zero by the geometry.
    const double r2 = R * R + Z0 * Z0;
    const double sin_theta = R / std::sqrt(r2);
    const double closed = m * e * v * sin_theta / r2;
    CHECK(id.lhs == doctest::Approx(closed).epsilon(1e-12));
    CHECK(id.rhs == doctest::Approx(closed).epsilon(1e-12));
    CHECK(id.lhs == doctest::Approx(id.rhs).epsilon(1e-13));
}

TEST_CASE("pair interaction identity for a static charge") {
    const MovingCharge still{-1.0, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.5}};
    const MagneticDipole dipole{{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
    const PairIdentity id = pair_identity_check(still, dipole);
    CHECK(id.lhs == 0.0);
    CHECK(id.rhs == 0.0);
}

TEST_CASE("pair interaction identity over random configurations") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> sep(0.5, 50.0);
    for (int i = 0; i < 10000; ++i) {
        Vec3 dir{u(rng), u(rng), u(rng)};
        if (dir.norm() < 1e-3) continue;
        const Vec3 offset = dir * (sep(rng) / dir.norm());
        const MovingCharge c{2.0 * u(rng), {0.05 * u(rng), 0.05 * u(rng), 0.05 * u(rng)},
                             {u(rng), u(rng), u(rng)}};
        const MagneticDipole d{{u(rng), u(rng), u(rng)}, c.position + offset};
        const PairIdentity id = pair_identity_check(c, d);
        // Relative to the interaction magnitude, not the dot products,
        // which may cancel for near-orthogonal configurations.
        const double scale =
            std::max(charge_B(c, d.position).norm() * d.moment.norm(),
                     std::fabs(c.charge) * c.velocity.norm() * dipole_A(d, c.position).norm());
        CHECK(std::fabs(id.lhs - id.rhs) <= 1e-12 * scale + 1e-300);
    }
}

TEST_CASE("lattice construction sum rules") {
    const double radius = 0.1, half_length = 2.0, flux = 2.0 * kPi;
    const DipoleLattice single = build_lattice(radius, half_length, flux, 1, 1, 1);
    REQUIRE(single.cells.size() == 1);
    CHECK(single.cells[0].position.norm() == 0.0);
    const double expected_total = flux * half_length / (2.0 * kPi);
    CHECK(single.cells[0].moment.z == doctest::Approx(expected_total).epsilon(1e-13));

    const DipoleLattice lat = build_lattice(radius, half_length, flux, 8, 3, 5);
    CHECK(lat.cells.size() == 8u * 3u * 5u);
    const Vec3 total = lat.total_moment();
    CHECK(total.x == doctest::Approx(0.0).scale(expected_total).epsilon(1e-13));
    CHECK(total.y == doctest::Approx(0.0).scale(expected_total).epsilon(1e-13));
    CHECK(total.z == doctest::Approx(expected_total).epsilon(1e-12));
    for (const auto& c : lat.cells) {
        CHECK(std::hypot(c.position.x, c.position.y) <= radius + 1e-15);
        CHECK(std::fabs(c.position.z) <= half_length);
        // Uniform magnetization: every cell carries the same moment.
        CHECK(c.moment.z == doctest::Approx(lat.cells[0].moment.z).epsilon(1e-13));
    }

    const DipoleLattice none = build_lattice(radius, half_length, 0.0, 4, 2, 3);
    for (const auto& c : none.cells) CHECK(c.moment.norm() == 0.0);

    CHECK_THROWS_AS(build_lattice(0.0, 1.0, 1.0, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(1.0, 1.0, 1.0, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("single cell lattice matches a direct dipole line integral") {
    const DipoleLattice lat = build_lattice(0.1, 2.0, 2.0 * kPi, 1, 1, 1);
    const ABGeometry g = canonical();
    const ActionReport report = lattice_action_potential_picture(lat, g);
    CHECK(report.method == ActionMethod::lattice_potential_picture);

    // Same integral assembled by hand over the same clamped range.
    const double ymax = 10.0 * lat.half_length;
    const MagneticDipole& cell = lat.cells[0];
    double sides[2];
    int idx = 0;
    for (const double x : {-g.impact, g.impact}) {
        const QuadResult q = integrate_adaptive(
            [&](double y) { return g.charge * dipole_A(cell, {x, y, 0.0}).y; }, -ymax, ymax,
            1e-12, 1e-15);
        CHECK(q.converged);
        sides[idx++] = q.value;
    }
    const double direct_delta = sides[1] - sides[0];
    CHECK(report.delta_I == doctest::Approx(direct_delta).epsilon(1e-10));
}

TEST_CASE("potential and field integrands agree pointwise") {
    const DipoleLattice lat = build_lattice(0.1, 5.0, 2.0 * kPi, 4, 2, 4);
    const ABGeometry g = canonical();
    for (const double y : {-15.0, -2.0, 0.3, 1.0, 40.0}) {
        const double pot = lattice_potential_integrand(lat, g, PathSide::right, y);
        const double fld = lattice_field_integrand(lat, g, PathSide::right, y);
        CHECK(fld == doctest::Approx(pot).epsilon(1e-13));
    }
}

TEST_CASE("field picture time integrand equals the pair interaction") {
    const DipoleLattice lat = build_lattice(0.1, 2.0, 2.0 * kPi, 1, 1, 1);
    const ABGeometry g = canonical();
    for (const double y : {-3.0, 0.5, 7.0}) {
        const MovingCharge probe{g.charge, {0.0, g.speed, 0.0}, {g.impact, y, 0.0}};
        const PairIdentity id = pair_identity_check(probe, lat.cells[0]);
        const double integrand = lattice_field_integrand(lat, g, PathSide::right, y);
        CHECK(integrand * g.speed == id.lhs);
    }
}

TEST_CASE("a static probe exerts no field picture interaction") {
    const DipoleLattice lat = build_lattice(0.1, 2.0, 2.0 * kPi, 2, 2, 4);
    const MovingCharge still{-1.0, {0.0, 0.0, 0.0}, {1.0, 0.4, 0.0}};
    for (const auto& cell : lat.cells) {
        CHECK(dot(charge_B(still, cell.position), cell.moment) == 0.0);
    }
}

TEST_CASE("the two pictures agree to reassociation accuracy") {
    const DipoleLattice lat = build_lattice(0.1, 20.0, 2.0 * kPi, 16, 2, 8);
    const ABGeometry g = canonical();
    const ActionReport pot = lattice_action_potential_picture(lat, g);
    const ActionReport fld = lattice_action_field_picture(lat, g);
    CHECK(fld.method == ActionMethod::lattice_field_picture);
    const double scale = std::fabs(g.charge * g.magnet.flux);
    CHECK(std::fabs(pot.delta_I - fld.delta_I) <= 1e-10 * scale);
    // Same sign as the flux-string answer.
    CHECK(pot.delta_I < 0.0);
}

TEST_CASE("worker count does not change the lattice result") {
    const DipoleLattice lat = build_lattice(0.1, 10.0, 2.0 * kPi, 8, 2, 8);
    const ABGeometry g = canonical();
    const double serial = lattice_action_potential_picture(lat, g, 1).delta_I;
    const double parallel = lattice_action_potential_picture(lat, g, 4).delta_I;
    CHECK(parallel == doctest::Approx(serial).epsilon(1e-12));
    CHECK_THROWS_AS(lattice_action_potential_picture(lat, g, 0), std::invalid_argument);
}

TEST_CASE("zero flux lattice actions vanish") {
    const DipoleLattice lat = build_lattice(0.1, 5.0, 0.0, 2, 2, 4);
    const ABGeometry g = canonical();
    CHECK(lattice_action_potential_picture(lat, g).delta_I == 0.0);
    CHECK(lattice_action_field_picture(lat, g).delta_I == 0.0);
}

TEST_CASE("paths that graze a cell are rejected") {
    // One z-slab keeps a centroid ring at z = 0; an impact of 0.12 puts
    // the path within the outer cells' arc extent.
    const DipoleLattice lat = build_lattice(0.1, 0.05, 2.0 * kPi, 1, 2, 4);
    const ABGeometry g{FluxString{0.1, 2.0 * kPi}, 0.12, -kInf, kInf, 0.01, -1.0};
    CHECK_THROWS_AS(lattice_action_potential_picture(lat, g), std::domain_error);
    CHECK_THROWS_AS(lattice_action_field_picture(lat, g), std::domain_error);
}

TEST_CASE("geometry invariants are enforced") {
    const FluxString s{0.5, 1.0};
    CHECK_THROWS_AS(ABGeometry(s, 0.4, -kInf, kInf, 0.01, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ABGeometry(s, 1.0, 1.0, 2.0, 0.01, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ABGeometry(s, 1.0, -1.0, 1.0, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ABGeometry(s, 1.0, -1.0, 1.0, 0.2, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ABGeometry(s, 1.0, -1.0, 1.0, 0.01, kInf), std::invalid_argument);
}

TEST_CASE("inertness bound scaling") {
    const InertnessBound canonical = inertness_bound(1e-8, 1e-4);
    CHECK(canonical.field_ratio == doctest::Approx(1e-8).epsilon(1e-12));
    CHECK(canonical.transition_probability == doctest::Approx(1e-16).epsilon(1e-12));
    CHECK(canonical.aggregate == doctest::Approx(1e-4).epsilon(1e-12));

    const InertnessBound equal = inertness_bound(2.5, 2.5, 1.0);
    CHECK(equal.field_ratio == 1.0);
    CHECK(equal.transition_probability == 1.0);
    CHECK(equal.aggregate == 1.0);

    CHECK_THROWS_AS(inertness_bound(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(inertness_bound(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(inertness_bound(1.0, 1.0, -5.0), std::invalid_argument);
}

}  // TEST_SUITE
