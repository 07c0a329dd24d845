#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "magphase/vec3.hpp"

namespace magphase {

// Straight worldline x(t) = start + speed * t * direction.  The default
// orientation is motion parallel to the y axis along the vertical line
// x = impact_x, z = z_offset; y_range bounds the traversed segment and
// either endpoint may be infinite.  position(0) sits at y = y_min when
// that bound is finite and at y = 0 otherwise.
struct StraightPath {
    double impact_x = 0.0;
    double z_offset = 0.0;
    Vec3 direction{0.0, 1.0, 0.0};
    double speed = 1.0;
    double y_min = -std::numeric_limits<double>::infinity();
    double y_max = std::numeric_limits<double>::infinity();

    StraightPath(double impact_x_, double z_offset_, Vec3 direction_, double speed_,
                 double y_min_, double y_max_)
        : impact_x(impact_x_),
          z_offset(z_offset_),
          direction(direction_),
          speed(speed_),
          y_min(y_min_),
          y_max(y_max_) {
        if (!std::isfinite(impact_x) || !std::isfinite(z_offset) || !finite(direction)) {
            throw std::invalid_argument("StraightPath requires finite impact_x, z_offset and direction");
        }
        if (std::fabs(direction.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("StraightPath direction must be a unit vector");
        }
        if (!(speed > 0.0) || !std::isfinite(speed)) {
            throw std::invalid_argument("StraightPath speed must be positive and finite");
        }
        if (!(y_min < y_max)) {
            throw std::invalid_argument("StraightPath requires y_min < y_max");
        }
    }

    Vec3 start() const {
        const double y0 = std::isfinite(y_min) ? y_min : 0.0;
        return {impact_x, y0, z_offset};
    }

    Vec3 position(double t) const { return start() + direction * (speed * t); }
};

inline Vec3 path_position(const StraightPath& p, double t) { return p.position(t); }

}  // namespace magphase
