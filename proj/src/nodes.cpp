#include "rbffd/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rbffd/stencil.hpp"

namespace rbffd {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Generator tuning. The clip margin keeps lattice seeds off the boundary
// nodes; the reject margin is the closest approach allowed during
// relaxation. Both are fractions of h.
constexpr double kJitterFrac = 0.12;
constexpr double kClipMarginFrac = 0.65;
constexpr double kRejectMarginFrac = 0.45;
constexpr double kRepulsionRadiusFrac = 1.25;
constexpr double kRelaxStep = 0.2;
constexpr int kRelaxIters2D = 40;
constexpr int kRelaxIters3D = 30;
constexpr int kSurfaceRelaxIters = 25;

/// Uniform-cell spatial hash for repulsion neighbor queries. Bucket contents
/// stay in insertion (index) order so force sums are deterministic.
class CellGrid {
  public:
    CellGrid(const std::vector<Vec3>& pts, double cell, int dim)
        : pts_(pts), cell_(cell), dim_(dim) {
        for (std::size_t i = 0; i < pts.size(); ++i) table_[key(pts[i])].push_back(i);
    }

    template <class Fn>
    void for_neighbors(Vec3 p, double radius, Fn&& fn) const {
        const int reach = static_cast<int>(std::ceil(radius / cell_));
        const long cx = coord(p.x), cy = coord(p.y), cz = dim_ == 3 ? coord(p.z) : 0;
        const double r2 = radius * radius;
        for (long dz = (dim_ == 3 ? -reach : 0); dz <= (dim_ == 3 ? reach : 0); ++dz)
            for (long dy = -reach; dy <= reach; ++dy)
                for (long dx = -reach; dx <= reach; ++dx) {
                    auto it = table_.find(pack(cx + dx, cy + dy, cz + dz));
                    if (it == table_.end()) continue;
                    for (std::size_t j : it->second)
                        if (dist2(pts_[j], p) <= r2) fn(j);
                }
    }

  private:
    long coord(double v) const { return static_cast<long>(std::floor(v / cell_)); }
    std::uint64_t key(Vec3 p) const {
        return pack(coord(p.x), coord(p.y), dim_ == 3 ? coord(p.z) : 0);
    }
    static std::uint64_t pack(long x, long y, long z) {
        const std::uint64_t ux = static_cast<std::uint64_t>(x + (1l << 20));
        const std::uint64_t uy = static_cast<std::uint64_t>(y + (1l << 20));
        const std::uint64_t uz = static_cast<std::uint64_t>(z + (1l << 20));
        return (ux << 42) ^ (uy << 21) ^ uz;
    }

    const std::vector<Vec3>& pts_;
    double cell_;
    int dim_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> table_;
};

struct Segment {
    double t0, t1;
};

std::vector<Segment> boundary_segments(const Domain& domain, BcMode mode) {
    if (domain.kind() == DomainKind::Box) {
        // Perimeter parameter.
        return {{0.0, domain.boundary_total()}};
    }
    if (mode == BcMode::PureDirichlet) return {{0.0, 2.0 * kPi}};
    return {{-kPi, 0.0}, {0.0, kPi}};
}

/// Arc-length equispaced nodes along one 2D boundary segment.
void place_boundary_2d(const Domain& domain, BcMode mode, double h, const Segment& seg,
                       NodeSet& out) {
    const int table_n = 1 << 14;
    std::vector<double> cum(table_n + 1, 0.0);
    const double dt = (seg.t1 - seg.t0) / table_n;
    auto speed = [&](double t) {
        if (domain.kind() == DomainKind::Box) return 1.0;
        const double r = domain.polar_radius(t);
        const double rp = domain.polar_radius_deriv(t);
        return std::sqrt(r * r + rp * rp);
    };
    for (int i = 0; i < table_n; ++i) {
        const double tm = seg.t0 + (i + 0.5) * dt;
        cum[i + 1] = cum[i] + speed(tm) * dt;
    }
    const double length = cum[table_n];
    const int count = std::max<int>(1, static_cast<int>(std::llround(length / h)));
    for (int i = 0; i < count; ++i) {
        const double target = length * i / count;
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        const int cell = std::max<int>(1, static_cast<int>(it - cum.begin())) - 1;
        const double frac = (target - cum[cell]) / std::max(1e-300, cum[cell + 1] - cum[cell]);
        const double t = seg.t0 + (cell + frac) * dt;
        const BoundaryPoint bp = domain.boundary_point(t);
        out.push(bp.position, domain.classify_boundary(bp, mode), bp.normal, bp.theta);
    }
}

/// Numeric tangent frame of the 3D boundary parameterization.
void surface_frame(const Domain& domain, double theta, double phi, Vec3& s_theta,
                   Vec3& s_phi) {
    const double d = 1e-6;
    const Vec3 pt1 = domain.boundary_point(theta + d, phi).position;
    const Vec3 pt0 = domain.boundary_point(theta - d, phi).position;
    const Vec3 pp1 = domain.boundary_point(theta, phi + d).position;
    const Vec3 pp0 = domain.boundary_point(theta, phi - d).position;
    s_theta = (1.0 / (2.0 * d)) * (pt1 - pt0);
    s_phi = (1.0 / (2.0 * d)) * (pp1 - pp0);
}

/// Area-uniform boundary sample with surface repulsion (3D).
void place_boundary_3d(const Domain& domain, BcMode mode, double h, Rng& rng,
                       NodeSet& out) {
    // Envelope for rejection sampling: max area element over a coarse scan.
    double jmax = 0.0;
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 64; ++j) {
            const double t = -kPi + (i + 0.5) * (2.0 * kPi / 128);
            const double f = -0.5 * kPi + (j + 0.5) * (kPi / 64);
            Vec3 st, sp;
            surface_frame(domain, t, f, st, sp);
            jmax = std::max(jmax, norm2(cross(st, sp)));
        }
    jmax *= 1.1;

    const double area = domain.boundary_total();
    const int count =
        std::max<int>(4, static_cast<int>(std::llround(area * 2.0 / (std::sqrt(3.0) * h * h))));
    std::vector<double> thetas, phis;
    thetas.reserve(count);
    phis.reserve(count);
    long attempts = 0;
    const long max_attempts = 4000l * count + 100000;
    while (static_cast<int>(thetas.size()) < count) {
        if (++attempts > max_attempts)
            throw StageError("nodes", "boundary rejection sampling stalled");
        const double t = rng.uniform(-kPi, kPi);
        const double f = rng.uniform(-0.5 * kPi, 0.5 * kPi);
        const double u = rng.next_double();
        Vec3 st, sp;
        surface_frame(domain, t, f, st, sp);
        if (u * jmax <= norm2(cross(st, sp))) {
            thetas.push_back(t);
            phis.push_back(f);
        }
    }

    // Tangential repulsion; displacements are mapped back to parameter
    // increments through the surface frame.
    std::vector<Vec3> pos(count);
    for (int i = 0; i < count; ++i)
        pos[i] = domain.boundary_point(thetas[i], phis[i]).position;
    const double r0 = kRepulsionRadiusFrac * h;
    for (int iter = 0; iter < kSurfaceRelaxIters; ++iter) {
        CellGrid grid(pos, r0, 3);
        std::vector<double> new_t(thetas), new_p(phis);
        for (int i = 0; i < count; ++i) {
            Vec3 force{};
            grid.for_neighbors(pos[i], r0, [&](std::size_t j) {
                if (static_cast<int>(j) == i) return;
                const Vec3 diff = pos[i] - pos[j];
                const double d = norm2(diff);
                if (d < 1e-14) return;
                force = force + ((r0 - d) / d) * diff;
            });
            Vec3 st, sp;
            surface_frame(domain, thetas[i], phis[i], st, sp);
            const Vec3 n = cross(st, sp);
            const double nn = dot(n, n);
            if (nn < 1e-20) continue;  // parameterization pole
            const Vec3 ft = force - (dot(force, n) / nn) * n;
            // Solve [st sp] (dt, dp) ~= ft in the least-squares sense.
            const double g11 = dot(st, st), g12 = dot(st, sp), g22 = dot(sp, sp);
            const double det = g11 * g22 - g12 * g12;
            if (std::abs(det) < 1e-18) continue;
            const double b1 = dot(st, ft), b2 = dot(sp, ft);
            const double dtheta = (g22 * b1 - g12 * b2) / det;
            const double dphi = (g11 * b2 - g12 * b1) / det;
            new_t[i] = thetas[i] + kRelaxStep * dtheta;
            new_p[i] = std::clamp(phis[i] + kRelaxStep * dphi, -0.5 * kPi + 1e-9,
                                  0.5 * kPi - 1e-9);
        }
        thetas.swap(new_t);
        phis.swap(new_p);
        for (int i = 0; i < count; ++i)
            pos[i] = domain.boundary_point(thetas[i], phis[i]).position;
    }

    for (int i = 0; i < count; ++i) {
        const BoundaryPoint bp = domain.boundary_point(thetas[i], phis[i]);
        out.push(bp.position, domain.classify_boundary(bp, mode), bp.normal, bp.theta,
                 bp.phi);
    }
}

/// Jittered lattice seeds clipped to the interior with a boundary margin.
std::vector<Vec3> interior_seeds(const Domain& domain, double h, Rng& rng) {
    Vec3 lo, hi;
    domain.bounding_box(lo, hi);
    std::vector<Vec3> seeds;
    const double margin = kClipMarginFrac * h;
    if (domain.dimension() == 2) {
        const double dy = h * std::sqrt(3.0) / 2.0;
        int row = 0;
        for (double y = lo.y + 0.5 * dy; y < hi.y; y += dy, ++row) {
            const double x0 = lo.x + (row % 2 == 0 ? 0.5 : 1.0) * h;
            for (double x = x0; x < hi.x; x += h) {
                const double jx = rng.uniform(-kJitterFrac * h, kJitterFrac * h);
                const double jy = rng.uniform(-kJitterFrac * h, kJitterFrac * h);
                const Vec3 p{x + jx, y + jy, 0.0};
                if (domain.signed_distance(p) < -margin) seeds.push_back(p);
            }
        }
    } else {
        // FCC: integer sites with even coordinate sum, nearest distance h.
        const double a = h / std::sqrt(2.0);
        const int nx = static_cast<int>((hi.x - lo.x) / a) + 1;
        const int ny = static_cast<int>((hi.y - lo.y) / a) + 1;
        const int nz = static_cast<int>((hi.z - lo.z) / a) + 1;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    if ((i + j + k) % 2 != 0) continue;
                    const double jx = rng.uniform(-kJitterFrac * h, kJitterFrac * h);
                    const double jy = rng.uniform(-kJitterFrac * h, kJitterFrac * h);
                    const double jz = rng.uniform(-kJitterFrac * h, kJitterFrac * h);
                    const Vec3 p{lo.x + i * a + jx, lo.y + j * a + jy, lo.z + k * a + jz};
                    if (domain.signed_distance(p) < -margin) seeds.push_back(p);
                }
    }
    return seeds;
}

/// Neighbor repulsion with boundary nodes fixed; moves that would cross the
/// reject margin are discarded.
void relax_interior(const Domain& domain, double h, const std::vector<Vec3>& fixed,
                    std::vector<Vec3>& movable) {
    const double r0 = kRepulsionRadiusFrac * h;
    const double reject = kRejectMarginFrac * h;
    const int iters = domain.dimension() == 2 ? kRelaxIters2D : kRelaxIters3D;
    const std::size_t nf = fixed.size();
    std::vector<Vec3> all(fixed);
    all.insert(all.end(), movable.begin(), movable.end());
    for (int iter = 0; iter < iters; ++iter) {
        CellGrid grid(all, r0, domain.dimension());
        double max_move = 0.0;
        std::vector<Vec3> next(all.begin() + nf, all.end());
        for (std::size_t i = nf; i < all.size(); ++i) {
            Vec3 force{};
            grid.for_neighbors(all[i], r0, [&](std::size_t j) {
                if (j == i) return;
                const Vec3 diff = all[i] - all[j];
                const double d = norm2(diff);
                if (d < 1e-14) return;
                force = force + ((r0 - d) / d) * diff;
            });
            const Vec3 cand = all[i] + kRelaxStep * force;
            if (domain.signed_distance(cand) < -reject) {
                max_move = std::max(max_move, dist(cand, all[i]));
                next[i - nf] = cand;
            }
        }
        std::copy(next.begin(), next.end(), all.begin() + nf);
        if (max_move < 0.01 * h) break;
    }
    movable.assign(all.begin() + nf, all.end());
}

}  // namespace

std::size_t NodeSet::count(PointClass c) const {
    std::size_t k = 0;
    for (PointClass pc : classes)
        if (pc == c) ++k;
    return k;
}

void NodeSet::push(Vec3 p, PointClass c, Vec3 normal, double theta, double phi) {
    points.push_back(p);
    classes.push_back(c);
    normals.push_back(normal);
    param_theta.push_back(theta);
    param_phi.push_back(phi);
}

NodeSet generate_nodes(const Domain& domain, double h, std::uint64_t seed, BcMode mode) {
    if (h <= 0.0) throw StageError("nodes", "target spacing must be positive");
    if (domain.kind() == DomainKind::Box && domain.dimension() == 3)
        throw StageError("nodes", "3D box generation is not supported (test fixture)");
    NodeSet out;
    out.dim = domain.dimension();
    out.target_spacing = h;
    out.seed = seed;

    Rng rng(derive_seed(seed, 1));
    if (domain.dimension() == 2) {
        for (const Segment& seg : boundary_segments(domain, mode))
            place_boundary_2d(domain, mode, h, seg, out);
    } else {
        place_boundary_3d(domain, mode, h, rng, out);
    }

    Rng rng_interior(derive_seed(seed, 2));
    std::vector<Vec3> interior = interior_seeds(domain, h, rng_interior);
    if (interior.empty()) throw StageError("nodes", "insufficient nodes for spacing h");
    relax_interior(domain, h, out.points, interior);
    for (const Vec3& p : interior) out.push(p, PointClass::Interior);

    if (separation_distance(out) <= 1e-9 * h)
        throw StageError("nodes", "degenerate node set (duplicate points)");
    return out;
}

NodeSet generate_evaluation_set(const Domain& domain, const NodeSet& X, double q,
                                std::uint64_t seed, BcMode mode) {
    if (q < 1.0) throw StageError("nodes", "oversampling parameter must be >= 1");
    if (std::abs(q - 1.0) < 1e-12) {
        NodeSet Y = X;  // collocation limit
        return Y;
    }
    const double h = X.target_spacing;
    const std::size_t N = X.size();
    double hy = h / std::pow(q, 1.0 / domain.dimension());
    NodeSet Y;
    for (int attempt = 0;; ++attempt) {
        Y = generate_nodes(domain, hy, derive_seed(seed, 7), mode);
        const double ratio = static_cast<double>(Y.size()) / static_cast<double>(N);
        if (ratio >= 0.8 * q && ratio <= 1.25 * q) break;
        if (attempt >= 3)
            throw StageError("nodes", "could not reach target oversampling M/N ~= q");
        hy *= std::pow(ratio / q, 1.0 / domain.dimension());
    }

    // Snap: each x claims its nearest unused candidate, in node order.
    KdTree tree(Y.points, Y.dim);
    std::vector<char> used(Y.size(), 0);
    for (std::size_t k = 0; k < N; ++k) {
        const std::int32_t j = tree.nearest_if(
            X.points[k], [&](std::int32_t c) { return !used[c]; });
        if (j < 0) throw StageError("nodes", "evaluation set exhausted while snapping");
        used[j] = 1;
        Y.points[j] = X.points[k];
        Y.classes[j] = X.classes[k];
        Y.normals[j] = X.normals[k];
        Y.param_theta[j] = X.param_theta[k];
        Y.param_phi[j] = X.param_phi[k];
    }
    return Y;
}

GhostAugmented add_ghost_layer(const Domain& domain, const NodeSet& X, double h) {
    GhostAugmented out;
    out.nodes = X;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (!X.is_boundary(i)) continue;
        const Vec3 g = X.points[i] + h * X.normals[i];
        if (domain.inside(g)) out.inside_warnings.push_back(out.nodes.size());
        out.nodes.push(g, PointClass::Ghost);
    }
    return out;
}

double separation_distance(const NodeSet& X) {
    if (X.size() < 2) throw StageError("nodes", "separation needs at least two points");
    KdTree tree(X.points, X.dim);
    double min_d = 1e300;
    for (std::size_t i = 0; i < X.size(); ++i)
        min_d = std::min(min_d, tree.nearest_other_dist(static_cast<std::int32_t>(i)));
    return 0.5 * min_d;
}

namespace {
double radical_inverse(unsigned base, std::uint64_t i) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
        x += f * (i % base);
        i /= base;
        f *= inv;
    }
    return x;
}
}  // namespace

SpacingReport spacing_report(const Domain& domain, const NodeSet& X, int probes_per_node) {
    if (X.size() < 2) throw StageError("nodes", "spacing report needs at least two points");
    KdTree tree(X.points, X.dim);
    Vec3 lo, hi;
    domain.bounding_box(lo, hi);
    const std::size_t target = probes_per_node * X.size();
    double fill2 = 0.0;
    std::uint64_t accepted = 0, i = 0;
    const std::uint64_t max_iter = 1000 * target + 100000;
    std::vector<std::int32_t> idx;
    std::vector<double> d2;
    while (accepted < target && i < max_iter) {
        Vec3 p{lo.x + (hi.x - lo.x) * radical_inverse(2, i),
               lo.y + (hi.y - lo.y) * radical_inverse(3, i),
               X.dim == 3 ? lo.z + (hi.z - lo.z) * radical_inverse(5, i) : 0.0};
        ++i;
        if (!domain.inside(p)) continue;
        ++accepted;
        tree.knn(p, 1, idx, d2);
        fill2 = std::max(fill2, d2[0]);
    }
    SpacingReport rep;
    rep.fill_distance = std::sqrt(fill2);
    rep.separation_distance = separation_distance(X);
    rep.quality = rep.separation_distance / rep.fill_distance;
    return rep;
}

std::uint64_t hash_nodes(const NodeSet& X) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(&X.dim, sizeof(X.dim));
    for (std::size_t i = 0; i < X.size(); ++i) {
        mix(&X.points[i], sizeof(Vec3));
        mix(&X.classes[i], sizeof(PointClass));
        mix(&X.normals[i], sizeof(Vec3));
    }
    return h;
}

void save_nodes(const NodeSet& X, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw StageError("nodes", "cannot open '" + path + "' for writing");
    char buf[512];
    std::snprintf(buf, sizeof(buf), "# dim=%d h=%.17g n=%zu\n", X.dim, X.target_spacing,
                  X.size());
    f << buf;
    for (std::size_t i = 0; i < X.size(); ++i) {
        int len = 0;
        for (int c = 0; c < X.dim; ++c)
            len += std::snprintf(buf + len, sizeof(buf) - len, "%.17g ", X.points[i][c]);
        len += std::snprintf(buf + len, sizeof(buf) - len, "%s", class_tag(X.classes[i]));
        if (X.is_boundary(i))
            for (int c = 0; c < X.dim; ++c)
                len += std::snprintf(buf + len, sizeof(buf) - len, " %.17g",
                                     X.normals[i][c]);
        f << buf << "\n";
    }
    if (!f) throw StageError("nodes", "write failed for '" + path + "'");
}

NodeSet load_nodes(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw StageError("nodes", "cannot open '" + path + "'");
    std::string header;
    std::getline(f, header);
    NodeSet X;
    std::size_t n = 0;
    if (std::sscanf(header.c_str(), "# dim=%d h=%lg n=%zu", &X.dim, &X.target_spacing,
                    &n) != 3)
        throw StageError("nodes", "malformed node file header");
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Vec3 p{}, nrm{};
        std::string tag;
        for (int c = 0; c < X.dim; ++c) ss >> (&p.x)[c];
        ss >> tag;
        if (!ss) throw StageError("nodes", "malformed node line: " + line);
        const PointClass pc = class_from_tag(tag);
        if (pc == PointClass::Dirichlet || pc == PointClass::Neumann) {
            for (int c = 0; c < X.dim; ++c) ss >> (&nrm.x)[c];
            if (!ss) throw StageError("nodes", "boundary node missing normal: " + line);
        }
        X.push(p, pc, nrm);
    }
    if (X.size() != n)
        throw StageError("nodes", "node count mismatch: header says " + std::to_string(n) +
                                      ", file has " + std::to_string(X.size()));
    return X;
}

}  // namespace rbffd
