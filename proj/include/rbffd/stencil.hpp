#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rbffd/types.hpp"

namespace rbffd {

/// Exact k-nearest-neighbor search tree. Distance ties are broken by the
/// smaller point index, which keeps neighbor lists deterministic on
/// lattice-like inputs. Queries are read-only and reentrant.
class KdTree {
  public:
    KdTree(const std::vector<Vec3>& points, int dim);

    std::size_t size() const { return xs_.size(); }

    /// Indices of the k nearest points, ascending by (distance, index).
    void knn(Vec3 query, int k, std::vector<std::int32_t>& idx,
             std::vector<double>& d2) const;

    /// Index of the nearest point; ties broken by smallest index.
    std::int32_t nearest(Vec3 query) const;

    /// Nearest point among those the predicate accepts, or -1 if none.
    std::int32_t nearest_if(Vec3 query, const std::function<bool(std::int32_t)>& accept) const;

    /// Distance from points[i] to its nearest other point.
    double nearest_other_dist(std::int32_t i) const;

  private:
    struct HeapEntry {
        double d2;
        std::int32_t idx;
    };
    template <class Visit>
    void search(Vec3 query, double& worst_d2, Visit&& visit) const;

    int dim_;
    std::vector<double> xs_, ys_, zs_;   // SoA in tree order for batched scans
    std::vector<std::int32_t> order_;    // tree order -> original index
    std::vector<std::int32_t> pos_of_;   // original index -> tree order
};

/// Per-center neighbor lists: row k holds the stencil of node k, the center
/// itself first, then the n-1 nearest other nodes.
struct StencilTable {
    int n = 0;
    std::vector<std::int32_t> neighbors;  // N rows of n indices

    const std::int32_t* row(std::size_t k) const { return neighbors.data() + k * n; }
    std::size_t rows() const { return n == 0 ? 0 : neighbors.size() / n; }
};

struct NodeSet;  // nodes.hpp

StencilTable build_stencils(const NodeSet& nodes, int n);

/// Evaluation-point to stencil assignment: k(y) = argmin_k ||y - x_k|| over
/// non-ghost centers, ties broken by smallest index.
std::vector<std::int32_t> assign_evaluation_points(const NodeSet& eval_points,
                                                   const NodeSet& centers);

}  // namespace rbffd
