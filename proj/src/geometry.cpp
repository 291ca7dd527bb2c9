#include "rbffd/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rbffd {
namespace {

constexpr double kPi = 3.14159265358979323846;

/// Wrap to [-pi, pi).
double wrap_pi(double t) {
    double w = std::remainder(t, 2.0 * kPi);
    if (w >= kPi) w -= 2.0 * kPi;
    if (w < -kPi) w += 2.0 * kPi;
    return w;
}

struct SphericalEval {
    double r, r_theta, r_phi;
};

SphericalEval eval_spherical(double a, double theta, double phi) {
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double u1 = a * sp * st, u2 = a * sp * ct, u3 = a * cp;
    const double s1 = std::sin(u1), s2 = std::sin(u2), s3 = std::sin(u3);
    const double c1 = std::cos(u1), c2 = std::cos(u2), c3 = std::cos(u3);
    const double prod = s1 * s2 * s3;
    const double r = std::sqrt(1.0 + prod * prod);

    const double du1_dt = a * sp * ct, du2_dt = -a * sp * st;
    const double du1_dp = a * cp * st, du2_dp = a * cp * ct, du3_dp = -a * sp;
    const double dprod_dt = c1 * du1_dt * s2 * s3 + s1 * c2 * du2_dt * s3;
    const double dprod_dp =
        c1 * du1_dp * s2 * s3 + s1 * c2 * du2_dp * s3 + s1 * s2 * c3 * du3_dp;
    return {r, prod * dprod_dt / r, prod * dprod_dp / r};
}

}  // namespace

PointClass class_from_tag(const std::string& tag) {
    if (tag == "I") return PointClass::Interior;
    if (tag == "D") return PointClass::Dirichlet;
    if (tag == "N") return PointClass::Neumann;
    if (tag == "G") return PointClass::Ghost;
    throw StageError("nodes", "unknown point class tag '" + tag + "'");
}

Domain::Domain(DomainKind kind, int dim, std::vector<double> params)
    : kind_(kind), dim_(dim), params_(std::move(params)) {
    compute_measures();
}

Domain Domain::star2d() { return polar_curve(0.1, 7.0, 1.0); }

Domain Domain::polar_curve(double amplitude, double f1, double f2) {
    return Domain(DomainKind::PolarCurve2D, 2, {amplitude, f1, f2});
}

Domain Domain::spherical3d() { return Domain(DomainKind::Spherical3D, 3, {2.0}); }

Domain Domain::disk(double radius) { return Domain(DomainKind::Disk, 2, {radius}); }

Domain Domain::box2d(Vec3 lo, Vec3 hi) {
    return Domain(DomainKind::Box, 2, {lo.x, lo.y, 0.0, hi.x, hi.y, 0.0});
}

Domain Domain::box3d(Vec3 lo, Vec3 hi) {
    return Domain(DomainKind::Box, 3, {lo.x, lo.y, lo.z, hi.x, hi.y, hi.z});
}

Domain Domain::from_name(const std::string& name, const std::vector<double>& params) {
    if (name == "star") return star2d();
    if (name == "polar") {
        if (params.size() != 3)
            throw StageError("geometry", "polar domain needs 3 parameters (amplitude f1 f2)");
        return polar_curve(params[0], params[1], params[2]);
    }
    if (name == "sphere3d") return spherical3d();
    if (name == "disk") return disk(params.empty() ? 1.0 : params[0]);
    if (name == "box2d") {
        if (params.size() != 4)
            throw StageError("geometry", "box2d needs 4 parameters (x0 y0 x1 y1)");
        return box2d({params[0], params[1], 0.0}, {params[2], params[3], 0.0});
    }
    if (name == "box3d") {
        if (params.size() != 6)
            throw StageError("geometry", "box3d needs 6 parameters (x0 y0 z0 x1 y1 z1)");
        return box3d({params[0], params[1], params[2]}, {params[3], params[4], params[5]});
    }
    throw StageError("geometry", "unknown domain '" + name + "'");
}

std::string Domain::name() const {
    switch (kind_) {
        case DomainKind::PolarCurve2D: return "star";
        case DomainKind::Spherical3D: return "sphere3d";
        case DomainKind::Disk: return "disk";
        case DomainKind::Box: return dim_ == 2 ? "box2d" : "box3d";
    }
    return "?";
}

double Domain::polar_radius(double theta) const {
    switch (kind_) {
        case DomainKind::PolarCurve2D:
            return 1.0 + params_[0] * (std::sin(params_[1] * theta) + std::sin(params_[2] * theta));
        case DomainKind::Disk:
            return params_[0];
        default:
            throw StageError("geometry", "polar_radius on a non-polar domain");
    }
}

double Domain::polar_radius_deriv(double theta) const {
    switch (kind_) {
        case DomainKind::PolarCurve2D:
            return params_[0] * (params_[1] * std::cos(params_[1] * theta) +
                                 params_[2] * std::cos(params_[2] * theta));
        case DomainKind::Disk:
            return 0.0;
        default:
            throw StageError("geometry", "polar_radius_deriv on a non-polar domain");
    }
}

double Domain::spherical_radius(double theta, double phi) const {
    if (kind_ != DomainKind::Spherical3D)
        throw StageError("geometry", "spherical_radius on a non-spherical domain");
    return eval_spherical(params_[0], theta, phi).r;
}

double Domain::signed_distance(Vec3 p) const {
    switch (kind_) {
        case DomainKind::PolarCurve2D:
        case DomainKind::Disk: {
            const double rho = std::hypot(p.x, p.y);
            if (rho == 0.0) return -polar_radius(0.0);
            return rho - polar_radius(std::atan2(p.y, p.x));
        }
        case DomainKind::Spherical3D: {
            const double rho = norm2(p);
            if (rho == 0.0) return -1.0;
            const double phi = std::asin(std::clamp(p.z / rho, -1.0, 1.0));
            return rho - spherical_radius(std::atan2(p.y, p.x), phi);
        }
        case DomainKind::Box: {
            double sd = -1e300;
            for (int i = 0; i < dim_; ++i) {
                sd = std::max(sd, params_[i] - p[i]);
                sd = std::max(sd, p[i] - params_[3 + i]);
            }
            return sd;
        }
    }
    return 0.0;
}

BoundaryPoint Domain::boundary_point(double theta) const {
    if (dim_ != 2) throw StageError("geometry", "2D boundary_point on a 3D domain");
    BoundaryPoint bp;
    bp.theta = theta;
    if (kind_ == DomainKind::Box) {
        // Perimeter parameter, counterclockwise from the lower-left corner.
        const double w = params_[3] - params_[0], h = params_[4] - params_[1];
        double t = std::fmod(theta, 2.0 * (w + h));
        if (t < 0.0) t += 2.0 * (w + h);
        if (t < w) {
            bp.position = {params_[0] + t, params_[1], 0.0};
            bp.normal = {0.0, -1.0, 0.0};
        } else if (t < w + h) {
            bp.position = {params_[3], params_[1] + (t - w), 0.0};
            bp.normal = {1.0, 0.0, 0.0};
        } else if (t < 2.0 * w + h) {
            bp.position = {params_[3] - (t - w - h), params_[4], 0.0};
            bp.normal = {0.0, 1.0, 0.0};
        } else {
            bp.position = {params_[0], params_[4] - (t - 2.0 * w - h), 0.0};
            bp.normal = {-1.0, 0.0, 0.0};
        }
        return bp;
    }
    const double r = polar_radius(theta);
    const double rp = polar_radius_deriv(theta);
    const double ct = std::cos(theta), st = std::sin(theta);
    bp.position = {r * ct, r * st, 0.0};
    const Vec3 tangent = {rp * ct - r * st, rp * st + r * ct, 0.0};
    const double tn = norm2(tangent);
    if (tn < 1e-14) throw StageError("geometry", "degenerate parameterization point");
    // Counterclockwise curve: rotating the tangent by -90 degrees points outward.
    bp.normal = {tangent.y / tn, -tangent.x / tn, 0.0};
    return bp;
}

BoundaryPoint Domain::boundary_point(double theta, double phi) const {
    if (kind_ != DomainKind::Spherical3D)
        throw StageError("geometry", "3D boundary_point on a non-spherical domain");
    const auto ev = eval_spherical(params_[0], theta, phi);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const Vec3 e = {cp * ct, cp * st, sp};
    const Vec3 e_theta = {-cp * st, cp * ct, 0.0};
    const Vec3 e_phi = {-sp * ct, -sp * st, cp};
    const Vec3 s_theta = ev.r_theta * e + ev.r * e_theta;
    const Vec3 s_phi = ev.r_phi * e + ev.r * e_phi;
    Vec3 n = cross(s_theta, s_phi);
    const double nn = norm2(n);
    BoundaryPoint bp;
    bp.theta = theta;
    bp.phi = phi;
    bp.position = ev.r * e;
    if (nn < 1e-14) {
        // Parameterization poles; the surface is radial there.
        if (std::abs(cp) < 1e-7) {
            bp.normal = e;
            return bp;
        }
        throw StageError("geometry", "degenerate parameterization point");
    }
    n = (1.0 / nn) * n;
    if (dot(n, e) < 0.0) n = -1.0 * n;
    bp.normal = n;
    return bp;
}

PointClass Domain::classify_boundary(const BoundaryPoint& bp, BcMode mode) const {
    if (mode == BcMode::PureDirichlet) return PointClass::Dirichlet;
    switch (kind_) {
        case DomainKind::PolarCurve2D:
        case DomainKind::Disk:
            return wrap_pi(bp.theta) < 0.0 ? PointClass::Dirichlet : PointClass::Neumann;
        case DomainKind::Spherical3D:
            return bp.position.z < 0.7 ? PointClass::Dirichlet : PointClass::Neumann;
        case DomainKind::Box:
            return PointClass::Dirichlet;  // fixture: no mixed split defined
    }
    return PointClass::Dirichlet;
}

double Domain::boundary_measure(PointClass which, BcMode mode) const {
    if (mode == BcMode::PureDirichlet)
        return which == PointClass::Dirichlet ? boundary_total() : 0.0;
    if (kind_ == DomainKind::Box)
        return which == PointClass::Dirichlet ? boundary_total() : 0.0;
    return which == PointClass::Dirichlet ? measure_dirichlet_ : measure_neumann_;
}

void Domain::bounding_box(Vec3& lo, Vec3& hi) const {
    switch (kind_) {
        case DomainKind::PolarCurve2D: {
            const double rmax = 1.0 + 2.0 * std::abs(params_[0]) + 1e-9;
            lo = {-rmax, -rmax, 0.0};
            hi = {rmax, rmax, 0.0};
            break;
        }
        case DomainKind::Disk:
            lo = {-params_[0], -params_[0], 0.0};
            hi = {params_[0], params_[0], 0.0};
            break;
        case DomainKind::Spherical3D: {
            const double rmax = std::sqrt(2.0) + 1e-9;
            lo = {-rmax, -rmax, -rmax};
            hi = {rmax, rmax, rmax};
            break;
        }
        case DomainKind::Box:
            lo = {params_[0], params_[1], params_[2]};
            hi = {params_[3], params_[4], params_[5]};
            break;
    }
}

void Domain::compute_measures() {
    switch (kind_) {
        case DomainKind::PolarCurve2D: {
            const int n = 1 << 16;
            const double dt = 2.0 * kPi / n;
            double area = 0.0, arc_d = 0.0, arc_n = 0.0;
            for (int i = 0; i < n; ++i) {
                const double t = -kPi + (i + 0.5) * dt;
                const double r = polar_radius(t);
                const double rp = polar_radius_deriv(t);
                area += 0.5 * r * r * dt;
                const double ds = std::sqrt(r * r + rp * rp) * dt;
                (t < 0.0 ? arc_d : arc_n) += ds;
            }
            volume_ = area;
            measure_dirichlet_ = arc_d;
            measure_neumann_ = arc_n;
            break;
        }
        case DomainKind::Disk: {
            const double r = params_[0];
            volume_ = kPi * r * r;
            measure_dirichlet_ = kPi * r;
            measure_neumann_ = kPi * r;
            break;
        }
        case DomainKind::Spherical3D: {
            const int nt = 512, np = 256;
            const double dt = 2.0 * kPi / nt, dp = kPi / np;
            double vol = 0.0, area_d = 0.0, area_n = 0.0;
            for (int i = 0; i < nt; ++i) {
                const double t = -kPi + (i + 0.5) * dt;
                for (int j = 0; j < np; ++j) {
                    const double f = -0.5 * kPi + (j + 0.5) * dp;
                    const auto ev = eval_spherical(params_[0], t, f);
                    vol += (ev.r * ev.r * ev.r / 3.0) * std::cos(f) * dt * dp;
                    const double ct = std::cos(t), st = std::sin(t);
                    const double cp = std::cos(f), sp = std::sin(f);
                    const Vec3 e = {cp * ct, cp * st, sp};
                    const Vec3 s_theta =
                        ev.r_theta * e + ev.r * Vec3{-cp * st, cp * ct, 0.0};
                    const Vec3 s_phi = ev.r_phi * e + ev.r * Vec3{-sp * ct, -sp * st, cp};
                    const double da = norm2(cross(s_theta, s_phi)) * dt * dp;
                    (ev.r * sp < 0.7 ? area_d : area_n) += da;
                }
            }
            volume_ = vol;
            measure_dirichlet_ = area_d;
            measure_neumann_ = area_n;
            break;
        }
        case DomainKind::Box: {
            const double w = params_[3] - params_[0], h = params_[4] - params_[1];
            if (dim_ == 2) {
                volume_ = w * h;
                measure_dirichlet_ = 2.0 * (w + h);
                measure_neumann_ = 0.0;
            } else {
                const double d = params_[5] - params_[2];
                volume_ = w * h * d;
                measure_dirichlet_ = 2.0 * (w * h + w * d + h * d);
                measure_neumann_ = 0.0;
            }
            break;
        }
    }
}

}  // namespace rbffd
