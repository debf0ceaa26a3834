#pragma once

#include <Eigen/Dense>

namespace sphform {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Roll-free spherical angles of a pointing direction.
/// psi is the azimuth in [-pi, pi), phi the elevation in [-pi/2, pi/2].
struct RpyAngles {
    double psi = 0.0;
    double phi = 0.0;
};

/// Cross-product matrix: hat(x) * y == x.cross(y).
Mat3 hat(const Vec3& x);

/// Angle between two unit vectors in [0, pi]. The dot product is clamped first.
double geodesic_angle(const Vec3& a, const Vec3& b);

/// Unit axis k with b == rodrigues(k, geodesic_angle(a, b)) * a.
///
/// When a and b are parallel or antiparallel any unit vector orthogonal to a
/// works; the choice is the normalized projection of e3 onto the plane
/// orthogonal to a, or of e1 when a is within 1e-8 of the e3 axis.
Vec3 rotation_axis(const Vec3& a, const Vec3& b);

/// I + sin(angle) hat(u) + (1 - cos(angle)) hat(u)^2 for a unit axis u.
Mat3 rodrigues(const Vec3& axis, double angle);

/// cos(ab) - [cos(ac) cos(bc) + sin(ac) sin(bc) (k_ac . k_bc)], which vanishes
/// for every triple of unit vectors.
double spherical_cosine_residual(const Vec3& a, const Vec3& b, const Vec3& c);

Vec3 from_rpy(const RpyAngles& r);

/// Inverse of from_rpy. At the poles psi is reported as 0.
RpyAngles to_rpy(const Vec3& g);

bool is_unit(const Vec3& v, double tol = 1e-9);

/// Orthogonal with determinant +1 within tol.
bool is_rotation(const Mat3& m, double tol = 1e-9);

}  // namespace sphform
