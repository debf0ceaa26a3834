#include "sphform/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sphform {

Mat3 hat(const Vec3& x)
{
    Mat3 m;
    m << 0.0, -x.z(), x.y(),
         x.z(), 0.0, -x.x(),
         -x.y(), x.x(), 0.0;
    return m;
}

double geodesic_angle(const Vec3& a, const Vec3& b)
{
    return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

namespace {

Vec3 orthogonal_fallback(const Vec3& a)
{
    const Vec3 e3 = Vec3::UnitZ();
    const Vec3 ref = a.cross(e3).norm() < 1e-8 ? Vec3::UnitX() : e3;
    return (ref - a * a.dot(ref)).normalized();
}

}  // namespace

Vec3 rotation_axis(const Vec3& a, const Vec3& b)
{
    const Vec3 c = a.cross(b);
    const double s = std::sin(geodesic_angle(a, b));
    // sin(theta) and |a x b| agree for unit inputs; below this the direction is noise
    if (s < 1e-12 || c.norm() < 1e-12)
        return orthogonal_fallback(a);
    return c / c.norm();
}

Mat3 rodrigues(const Vec3& axis, double angle)
{
    const Mat3 h = hat(axis);
    return Mat3::Identity() + std::sin(angle) * h + (1.0 - std::cos(angle)) * h * h;
}

double spherical_cosine_residual(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double t_ac = geodesic_angle(a, c);
    const double t_bc = geodesic_angle(b, c);
    const Vec3 k_ac = rotation_axis(c, a);
    const Vec3 k_bc = rotation_axis(c, b);
    return std::clamp(a.dot(b), -1.0, 1.0)
        - (std::cos(t_ac) * std::cos(t_bc) + std::sin(t_ac) * std::sin(t_bc) * k_ac.dot(k_bc));
}

Vec3 from_rpy(const RpyAngles& r)
{
    return {std::cos(r.psi) * std::cos(r.phi),
            std::sin(r.psi) * std::cos(r.phi),
            std::sin(r.phi)};
}

RpyAngles to_rpy(const Vec3& g)
{
    RpyAngles r;
    const double rho = std::hypot(g.x(), g.y());
    r.phi = std::atan2(g.z(), rho);
    if (rho < 1e-12) {
        r.psi = 0.0;
        return r;
    }
    r.psi = std::atan2(g.y(), g.x());
    if (r.psi >= std::numbers::pi)
        r.psi -= 2.0 * std::numbers::pi;
    return r;
}

bool is_unit(const Vec3& v, double tol)
{
    return std::abs(v.norm() - 1.0) <= tol;
}

bool is_rotation(const Mat3& m, double tol)
{
    return (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol
        && std::abs(m.determinant() - 1.0) <= tol;
}

}  // namespace sphform
