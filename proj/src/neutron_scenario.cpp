#include "magphase/neutron_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magphase/fields.hpp"

namespace magphase {
namespace {

constexpr double kPi = std::numbers::pi;

// The EMF integral's value tends to zero with the truncation length
// while the integrand does not, so the absolute tolerance is what
// resolves the deep-truncation rungs; 1e-13 sits well below the
// smallest rung value and above the summation roundoff floor.
constexpr double kSurfaceRelTol = 1e-9;
constexpr double kSurfaceAbsTol = 1e-13;

MagneticDipole neutron_dipole(const EMFCheck& chk) { return {chk.neutron_moment, chk.neutron_position}; }

void validate(const EMFCheck& chk) {
    if (!(chk.solenoid_radius > 0.0) || !(chk.half_length > 0.0)) {
        throw std::invalid_argument("EMF check requires positive solenoid radius and half length");
    }
    if (chk.phi_samples < 8) {
        throw std::invalid_argument("EMF check requires at least 8 angular samples");
    }
    const Vec3& v = chk.neutron_velocity;
    if (std::fabs(v.x) > 0.0 || std::fabs(v.y) > 0.0) {
        throw std::invalid_argument("EMF check requires the neutron velocity along z");
    }
    const double rho = std::hypot(chk.neutron_position.x, chk.neutron_position.y);
    if (std::fabs(rho - chk.solenoid_radius) <= kSingularDistance) {
        throw std::domain_error("neutron sits on the solenoid surface");
    }
}

// Average of f over the periodic angular grid, times 2 pi R: one z-row
// of the side-wall surface integral.  The trapezoid rule on a periodic
// smooth function converges spectrally, so the fixed grid contributes
// no meaningful error at the default offsets.
template <typename F>
double phi_row(const EMFCheck& chk, double z, F f) {
    const int n = chk.phi_samples;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / n;
        sum += f(phi, z);
    }
    return sum * (2.0 * kPi * chk.solenoid_radius / n);
}

Vec3 surface_point(const EMFCheck& chk, double phi, double z) {
    return {chk.solenoid_radius * std::cos(phi), chk.solenoid_radius * std::sin(phi), z};
}

}  // namespace

FieldProfile FieldProfile::constant(double amplitude) {
    return FieldProfile{"constant", [amplitude](double) { return amplitude; }};
}

FieldProfile FieldProfile::sinusoid(double amplitude, double period, double phase) {
    if (!(period > 0.0)) {
        throw std::invalid_argument("sinusoid profile requires period > 0");
    }
    return FieldProfile{"sinusoid", [amplitude, period, phase](double t) {
                            return amplitude * std::sin(2.0 * kPi * t / period + phase);
                        }};
}

FieldProfile FieldProfile::gaussian(double amplitude, double tau, double center) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("gaussian profile requires tau > 0");
    }
    return FieldProfile{"gaussian", [amplitude, tau, center](double t) {
                            const double u = (t - center) / tau;
                            return amplitude * std::exp(-u * u);
                        }};
}

FieldProfile FieldProfile::table(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("table profile requires at least one sample");
    }
    if (!std::is_sorted(samples.begin(), samples.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; })) {
        throw std::invalid_argument("table profile samples must be sorted by time");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].first == samples[i - 1].first) {
            throw std::invalid_argument("table profile samples must have distinct times");
        }
    }
    auto eval = [samples = std::move(samples)](double t) {
        if (t <= samples.front().first) return samples.front().second;
        if (t >= samples.back().first) return samples.back().second;
        const auto hi = std::lower_bound(samples.begin(), samples.end(), t,
                                         [](const auto& s, double v) { return s.first < v; });
        const auto lo = hi - 1;
        const double w = (t - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    };
    return FieldProfile{"table", std::move(eval)};
}

NeutronRun::NeutronRun(double moment_, double speed_, FieldProfile profile_, double t_start_,
                       double t_end_)
    : moment(moment_), speed(speed_), field_profile(std::move(profile_)), t_start(t_start_), t_end(t_end_) {
    if (!std::isfinite(moment) || !std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
        throw std::invalid_argument("NeutronRun requires a finite duration with t_start < t_end");
    }
    if (!(speed > 0.0)) {
        throw std::invalid_argument("NeutronRun requires speed > 0");
    }
}

QuadResult neutron_phase(const NeutronRun& run, double rel_tol, double abs_tol) {
    auto integrand = [&run](double t) { return run.moment * run.field_profile(t); };
    return integrate_adaptive(integrand, run.t_start, run.t_end, rel_tol, abs_tol);
}

QuadResult emf_on_solenoid(const EMFCheck& chk) {
    validate(chk);
    const MagneticDipole dip = neutron_dipole(chk);
    const Vec3 v = chk.neutron_velocity;
    auto row = [&](double z) {
        return phi_row(chk, z, [&](double phi, double zz) {
            const Vec3 p = surface_point(chk, phi, zz);
            const Vec3 e = moving_dipole_E(dip, v, p);
            return -e.x * std::sin(phi) + e.y * std::cos(phi);
        });
    };
    return integrate_adaptive(row, -chk.half_length, chk.half_length, kSurfaceRelTol, kSurfaceAbsTol);
}

GaussCheck emf_gauss_check(const EMFCheck& chk) {
    validate(chk);
    const MagneticDipole dip = neutron_dipole(chk);
    const double vz = chk.neutron_velocity.z;

    GaussCheck out;
    out.surface_E = emf_on_solenoid(chk).value;

    auto br_row = [&](double z) {
        return phi_row(chk, z, [&](double phi, double zz) {
            const Vec3 b = dipole_B(dip, surface_point(chk, phi, zz));
            return b.x * std::cos(phi) + b.y * std::sin(phi);
        });
    };
    out.surface_Br =
        -vz *
        integrate_adaptive(br_row, -chk.half_length, chk.half_length, kSurfaceRelTol, kSurfaceAbsTol)
            .value;

    const Vec3 v = chk.neutron_velocity;
    auto abs_row = [&](double z) {
        return phi_row(chk, z, [&](double phi, double zz) {
            const Vec3 e = moving_dipole_E(dip, v, surface_point(chk, phi, zz));
            return std::fabs(-e.x * std::sin(phi) + e.y * std::cos(phi));
        });
    };
    out.abs_scale =
        integrate_adaptive(abs_row, -chk.half_length, chk.half_length, 1e-6, kSurfaceAbsTol).value;
    return out;
}

QuadResult closed_surface_B_flux(const EMFCheck& chk) {
    validate(chk);
    const MagneticDipole dip = neutron_dipole(chk);

    auto side_row = [&](double z) {
        return phi_row(chk, z, [&](double phi, double zz) {
            const Vec3 b = dipole_B(dip, surface_point(chk, phi, zz));
            return b.x * std::cos(phi) + b.y * std::sin(phi);
        });
    };
    const QuadResult side = integrate_adaptive(side_row, -chk.half_length, chk.half_length,
                                               kSurfaceRelTol, kSurfaceAbsTol);

    // Outward flux through the cap at z = sign * half_length: the
    // angular average at each radius, integrated adaptively in rho.
    auto cap = [&](double sign) {
        auto rho_row = [&](double rho) {
            const int n = chk.phi_samples;
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                const double phi = 2.0 * kPi * (j + 0.5) / n;
                const Vec3 p{rho * std::cos(phi), rho * std::sin(phi), sign * chk.half_length};
                sum += dipole_B(dip, p).z;
            }
            return sum * (2.0 * kPi * rho / n) * sign;
        };
        return integrate_adaptive(rho_row, 0.0, chk.solenoid_radius, kSurfaceRelTol, kSurfaceAbsTol);
    };
    const QuadResult top = cap(1.0);
    const QuadResult bottom = cap(-1.0);

    QuadResult total;
    total.value = side.value + top.value + bottom.value;
    total.error_estimate = side.error_estimate + top.error_estimate + bottom.error_estimate;
    total.evaluations = side.evaluations + top.evaluations + bottom.evaluations;
    total.converged = side.converged && top.converged && bottom.converged;
    return total;
}

}  // namespace magphase
