#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbffd/geometry.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

/// Scattered node set with boundary classification. Boundary nodes carry the
/// outward normal and the boundary parameters they were generated from;
/// interior and ghost nodes carry a zero normal.
struct NodeSet {
    int dim = 2;
    double target_spacing = 0.0;  // generator target h
    std::uint64_t seed = 0;
    std::vector<Vec3> points;
    std::vector<PointClass> classes;
    std::vector<Vec3> normals;
    std::vector<double> param_theta;
    std::vector<double> param_phi;

    std::size_t size() const { return points.size(); }
    std::size_t count(PointClass c) const;
    std::size_t count_non_ghost() const { return size() - count(PointClass::Ghost); }
    bool is_boundary(std::size_t i) const {
        return classes[i] == PointClass::Dirichlet || classes[i] == PointClass::Neumann;
    }

    void push(Vec3 p, PointClass c, Vec3 normal = {}, double theta = 0.0, double phi = 0.0);
};

struct SpacingReport {
    double fill_distance = 0.0;       // probe-based sup-min estimate
    double separation_distance = 0.0;  // half the min pairwise distance
    double quality = 0.0;              // separation / fill
};

/// Quasi-uniform node set with target spacing h: boundary nodes arc-length
/// equispaced per boundary segment (2D) or area-uniform with surface
/// repulsion (3D); interior nodes from a jittered hex/FCC lattice relaxed by
/// neighbor repulsion with boundary nodes fixed. Deterministic in
/// (domain, h, seed, mode).
NodeSet generate_nodes(const Domain& domain, double h, std::uint64_t seed,
                       BcMode mode = BcMode::Mixed);

/// Oversampled evaluation set: spacing h_y = h / q^(1/d), then every x in X
/// is snapped onto its nearest unused candidate so that X is a subset of Y.
/// M/N lands in [0.8 q, 1.25 q].
NodeSet generate_evaluation_set(const Domain& domain, const NodeSet& X, double q,
                                std::uint64_t seed, BcMode mode = BcMode::Mixed);

struct GhostAugmented {
    NodeSet nodes;                              // X plus one ghost per boundary node
    std::vector<std::size_t> inside_warnings;   // ghost indices that landed inside
};

/// One ghost node per boundary node of X, at x_b + h n(x_b), appended after
/// the existing nodes. Ghosts are trial-space unknowns only.
GhostAugmented add_ghost_layer(const Domain& domain, const NodeSet& X, double h);

SpacingReport spacing_report(const Domain& domain, const NodeSet& X,
                             int probes_per_node = 10);

/// Half the minimum pairwise distance.
double separation_distance(const NodeSet& X);

/// FNV-1a over coordinates and classes; for determinism checks.
std::uint64_t hash_nodes(const NodeSet& X);

/// Plain-text node table: header `# dim=<d> h=<h> n=<count>`, one point per
/// line with d coordinates, a class tag, and normals for boundary points.
void save_nodes(const NodeSet& X, const std::string& path);
NodeSet load_nodes(const std::string& path);

}  // namespace rbffd
