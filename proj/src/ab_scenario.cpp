#include "magphase/ab_scenario.hpp"

#include <algorithm>
#include <future>
#include <numbers>

namespace magphase {
namespace {

constexpr double kPi = std::numbers::pi;

// Lattice path integrals run tighter than the library default so that
// the two interaction pictures, whose integrands are equal pointwise,
// also agree after independent adaptive refinement.
constexpr double kLatticeRelTol = 1e-12;
constexpr double kLatticeAbsTol = 1e-15;

double path_x(const ABGeometry& g, PathSide side) {
    return side == PathSide::right ? g.impact : -g.impact;
}

// Sum f(cell) over the lattice, optionally split into `workers` fixed
// contiguous chunks; chunk partials are combined in index order so the
// result depends on the chunk count only, never on scheduling.
template <typename PerCell>
double sum_over_cells(const std::vector<MagneticDipole>& cells, int workers, PerCell f) {
    const std::size_t n = cells.size();
    if (workers <= 1 || n < 2) {
        double sum = 0.0;
        for (const auto& c : cells) sum += f(c);
        return sum;
    }
    const std::size_t w = std::min<std::size_t>(workers, n);
    const std::size_t chunk = (n + w - 1) / w;
    std::vector<std::future<double>> parts;
    parts.reserve(w);
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        const std::size_t hi = std::min(n, lo + chunk);
        parts.push_back(std::async(std::launch::async, [&cells, &f, lo, hi] {
            double sum = 0.0;
            for (std::size_t i = lo; i < hi; ++i) sum += f(cells[i]);
            return sum;
        }));
    }
    double sum = 0.0;
    for (auto& p : parts) sum += p.get();
    return sum;
}

// Summed A_y of all cells at the path point, times the charge: the
// potential-picture interaction per unit path length.
double lattice_potential_integrand_chunked(const DipoleLattice& lat, const ABGeometry& g,
                                           PathSide side, double y, int workers) {
    const Vec3 r{path_x(g, side), y, 0.0};
    const double a_y = sum_over_cells(lat.cells, workers, [&r](const MagneticDipole& cell) {
        return dipole_A(cell, r).y;
    });
    return g.charge * a_y;
}

// Charge magnetic field dotted with each cell moment, summed and
// divided by the speed: the field-picture time integrand converted to
// a path-length integrand via v dt = dy.
double lattice_field_integrand_chunked(const DipoleLattice& lat, const ABGeometry& g,
                                       PathSide side, double y, int workers) {
    const Vec3 r{path_x(g, side), y, 0.0};
    const Vec3 velocity{0.0, g.speed, 0.0};
    const MovingCharge probe{g.charge, velocity, r};
    const double rate = sum_over_cells(lat.cells, workers, [&](const MagneticDipole& cell) {
        return dot(charge_B(probe, cell.position), cell.moment);
    });
    return rate / g.speed;
}

void check_clearance(const DipoleLattice& lat, const ABGeometry& g) {
    const double needed = std::max(lat.max_transverse_extent, kSingularDistance);
    for (const PathSide side : {PathSide::left, PathSide::right}) {
        const double x = path_x(g, side);
        for (const auto& c : lat.cells) {
            const double dx = x - c.position.x;
            const double dz = -c.position.z;
            const double dist = std::sqrt(dx * dx + dz * dz);
            if (dist < needed) {
                throw std::domain_error(
                    "lattice path approaches a cell centroid within one cell extent; "
                    "refine the lattice or move the path");
            }
        }
    }
}

struct YRange {
    double lo;
    double hi;
    bool lo_clamped;
    bool hi_clamped;
};

// Lattice integrals replace infinite path ends by +/-10 half_length;
// the integrand decays like y^-3 there, so the remainder is bounded by
// |f(Y)| * |Y| / 2 and charged to the error estimate.
YRange lattice_range(const DipoleLattice& lat, const ABGeometry& g) {
    const double span = 10.0 * lat.half_length;
    YRange r{g.y_start, g.y_end, false, false};
    if (!std::isfinite(r.lo)) {
        r.lo = -span;
        r.lo_clamped = true;
    }
    if (!std::isfinite(r.hi)) {
        r.hi = span;
        r.hi_clamped = true;
    }
    return r;
}

ActionReport lattice_action(const DipoleLattice& lat, const ABGeometry& g, ActionMethod method,
                            int workers) {
    if (workers < 1) {
        throw std::invalid_argument("worker count must be >= 1");
    }
    check_clearance(lat, g);

    ActionReport report;
    report.method = method;
    const YRange range = lattice_range(lat, g);
    for (const PathSide side : {PathSide::left, PathSide::right}) {
        auto integrand = [&, side](double y) {
            return method == ActionMethod::lattice_potential_picture
                       ? lattice_potential_integrand_chunked(lat, g, side, y, workers)
                       : lattice_field_integrand_chunked(lat, g, side, y, workers);
        };
        QuadResult q = integrate_adaptive(integrand, range.lo, range.hi, kLatticeRelTol,
                                          kLatticeAbsTol);
        if (range.lo_clamped) {
            q.error_estimate += 0.5 * std::fabs(integrand(range.lo)) * std::fabs(range.lo);
            ++q.evaluations;
        }
        if (range.hi_clamped) {
            q.error_estimate += 0.5 * std::fabs(integrand(range.hi)) * std::fabs(range.hi);
            ++q.evaluations;
        }
        (side == PathSide::left ? report.left : report.right) = q;
    }
    report.delta_I = report.right.value - report.left.value;
    return report;
}

}  // namespace

QuadResult action_along_path(const ABGeometry& g, PathSide side, double rel_tol, double abs_tol) {
    const double x = path_x(g, side);
    auto integrand = [&g, x](double y) { return g.charge * fluxstring_A(g.magnet, {x, y, 0.0}).y; };
    return integrate_interval(integrand, g.y_start, g.y_end, rel_tol, abs_tol);
}

ActionReport ab_action_difference(const ABGeometry& g, double rel_tol, double abs_tol) {
    ActionReport report;
    report.method = ActionMethod::flux_string;
    report.left = action_along_path(g, PathSide::left, rel_tol, abs_tol);
    report.right = action_along_path(g, PathSide::right, rel_tol, abs_tol);
    report.delta_I = report.right.value - report.left.value;
    return report;
}

std::vector<ScreenSample> interference_pattern(double delta_phase, const std::vector<double>& screen_xs,
                                               double fringe_scale) {
    if (!(fringe_scale > 0.0)) {
        throw std::invalid_argument("interference_pattern requires fringe_scale > 0");
    }
    std::vector<ScreenSample> out;
    out.reserve(screen_xs.size());
    for (const double x : screen_xs) {
        const double phase = 2.0 * kPi * x / fringe_scale + delta_phase;
        out.push_back({x, 2.0 * (1.0 + std::cos(phase))});
    }
    return out;
}

PairIdentity pair_identity_check(const MovingCharge& c, const MagneticDipole& d) {
    PairIdentity out;
    out.lhs = dot(charge_B(c, d.position), d.moment);
    out.rhs = c.charge * dot(c.velocity, dipole_A(d, c.position));
    return out;
}

DipoleLattice build_lattice(double radius, double half_length, double flux, int n_z, int n_r, int n_phi) {
    if (!(radius > 0.0) || !(half_length > 0.0)) {
        throw std::invalid_argument("build_lattice requires radius > 0 and half_length > 0");
    }
    if (n_z < 1 || n_r < 1 || n_phi < 1) {
        throw std::invalid_argument("build_lattice requires all cell counts >= 1");
    }
    if (!std::isfinite(flux)) {
        throw std::invalid_argument("build_lattice requires finite flux");
    }

    DipoleLattice lat;
    lat.magnet_radius = radius;
    lat.half_length = half_length;
    lat.cell_counts = {n_z, n_r, n_phi};
    lat.cells.reserve(static_cast<std::size_t>(n_z) * n_r * n_phi);

    const double magnetization = flux / (4.0 * kPi * kPi * radius * radius);
    const double cell_volume =
        (2.0 * half_length / n_z) * (kPi * radius * radius / (static_cast<double>(n_r) * n_phi));
    const Vec3 cell_moment{0.0, 0.0, magnetization * cell_volume};
    const double dz = 2.0 * half_length / n_z;

    for (int k = 0; k < n_r; ++k) {
        const double r_in = radius * std::sqrt(static_cast<double>(k) / n_r);
        const double r_out = radius * std::sqrt(static_cast<double>(k + 1) / n_r);
        const double rho = n_phi == 1 ? 0.0 : 0.5 * (r_in + r_out);
        const double arc = rho * 2.0 * kPi / n_phi;
        lat.max_transverse_extent = std::max({lat.max_transverse_extent, r_out - r_in, arc});
    }

    for (int i = 0; i < n_z; ++i) {
        const double z = -half_length + (i + 0.5) * dz;
        for (int k = 0; k < n_r; ++k) {
            const double r_in = radius * std::sqrt(static_cast<double>(k) / n_r);
            const double r_out = radius * std::sqrt(static_cast<double>(k + 1) / n_r);
            const double rho = n_phi == 1 ? 0.0 : 0.5 * (r_in + r_out);
            for (int j = 0; j < n_phi; ++j) {
                const double phi = (j + 0.5) * 2.0 * kPi / n_phi;
                lat.cells.push_back({cell_moment, {rho * std::cos(phi), rho * std::sin(phi), z}});
            }
        }
    }
    return lat;
}

double lattice_potential_integrand(const DipoleLattice& lat, const ABGeometry& g, PathSide side,
                                   double y) {
    return lattice_potential_integrand_chunked(lat, g, side, y, 1);
}

double lattice_field_integrand(const DipoleLattice& lat, const ABGeometry& g, PathSide side, double y) {
    return lattice_field_integrand_chunked(lat, g, side, y, 1);
}

ActionReport lattice_action_potential_picture(const DipoleLattice& lat, const ABGeometry& g, int workers) {
    return lattice_action(lat, g, ActionMethod::lattice_potential_picture, workers);
}

ActionReport lattice_action_field_picture(const DipoleLattice& lat, const ABGeometry& g, int workers) {
    return lattice_action(lat, g, ActionMethod::lattice_field_picture, workers);
}

InertnessBound inertness_bound(double atomic_distance, double electron_distance, double n_atoms) {
    if (!(atomic_distance > 0.0) || !(electron_distance > 0.0)) {
        throw std::invalid_argument("inertness_bound requires positive distances");
    }
    if (!(n_atoms >= 0.0) || !std::isfinite(n_atoms)) {
        throw std::invalid_argument("inertness_bound requires a finite non-negative atom count");
    }
    InertnessBound out;
    const double ratio = atomic_distance / electron_distance;
    out.field_ratio = ratio * ratio;
    out.transition_probability = out.field_ratio * out.field_ratio;
    out.aggregate = n_atoms * out.transition_probability;
    return out;
}

}  // namespace magphase
