#pragma once

#include <string>
#include <vector>

#include "rbffd/types.hpp"

namespace rbffd {

enum class DomainKind { PolarCurve2D, Spherical3D, Disk, Box };

/// How boundary conditions are distributed over the boundary.
enum class BcMode { Mixed, PureDirichlet };

/// A point on the domain boundary together with the parameter values it was
/// generated from, so classification and normals never need inverse mapping.
struct BoundaryPoint {
    Vec3 position;
    Vec3 normal;      // unit, outward
    double theta = 0.0;
    double phi = 0.0;  // 3D only
};

/// Implicit computational domain. Values are immutable; all queries are pure.
///
/// Supported kinds:
///  - PolarCurve2D: r(theta) = 1 + a (sin(f1 theta) + sin(f2 theta))
///  - Spherical3D:  r(theta,phi)^2 = 1 + [sin(a sp st) sin(a sp ct) sin(a cp)]^2
///    with sp = sin(phi), cp = cos(phi), st = sin(theta), ct = cos(theta)
///  - Disk, Box: exact-geometry test fixtures
class Domain {
  public:
    static Domain star2d();  // a = 1/10, f1 = 7, f2 = 1
    static Domain polar_curve(double amplitude, double f1, double f2);
    static Domain spherical3d();
    static Domain disk(double radius = 1.0);
    static Domain box2d(Vec3 lo, Vec3 hi);
    static Domain box3d(Vec3 lo, Vec3 hi);
    /// Lookup by harness config name: star | sphere3d | disk | box, with an
    /// optional parameter list (polar-curve amplitude/frequencies, disk
    /// radius, box corners).
    static Domain from_name(const std::string& name, const std::vector<double>& params = {});

    int dimension() const { return dim_; }
    DomainKind kind() const { return kind_; }

    /// Negative inside, positive outside. Radial-gauge distance for the
    /// curved kinds (not Euclidean), sign-exact.
    double signed_distance(Vec3 p) const;
    bool inside(Vec3 p) const { return signed_distance(p) < 0.0; }

    /// Boundary radius at polar angle theta (2D kinds).
    double polar_radius(double theta) const;
    /// Radial derivative dr/dtheta (2D kinds).
    double polar_radius_deriv(double theta) const;
    /// Boundary radius at longitude theta, latitude phi (3D kind).
    double spherical_radius(double theta, double phi) const;

    /// Boundary parameterization with analytic outward normal.
    BoundaryPoint boundary_point(double theta) const;              // 2D
    BoundaryPoint boundary_point(double theta, double phi) const;  // 3D

    /// Boundary classification from the stored parameters.
    PointClass classify_boundary(const BoundaryPoint& bp, BcMode mode) const;

    /// Cached region measures for the least-squares row scaling.
    double volume() const { return volume_; }                     // |Omega|
    double boundary_measure(PointClass which, BcMode mode) const;  // |dOmega_0| or |dOmega_1|
    double boundary_total() const { return measure_dirichlet_ + measure_neumann_; }

    /// Conservative bounding box, used for lattice seeding and probe points.
    void bounding_box(Vec3& lo, Vec3& hi) const;

    const std::vector<double>& params() const { return params_; }
    std::string name() const;

  private:
    Domain(DomainKind kind, int dim, std::vector<double> params);
    void compute_measures();

    DomainKind kind_;
    int dim_;
    std::vector<double> params_;
    double volume_ = 0.0;
    double measure_dirichlet_ = 0.0;  // mixed-mode split
    double measure_neumann_ = 0.0;
};

}  // namespace rbffd
