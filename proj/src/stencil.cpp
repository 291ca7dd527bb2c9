#include "rbffd/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rbffd/kernels.hpp"
#include "rbffd/nodes.hpp"

namespace rbffd {

namespace {
constexpr std::int32_t kLeafSize = 16;

inline bool heap_worse(double d2a, std::int32_t ia, double d2b, std::int32_t ib) {
    // "worse" = farther, ties resolved against the larger index
    return d2a != d2b ? d2a > d2b : ia > ib;
}
}  // namespace

KdTree::KdTree(const std::vector<Vec3>& points, int dim) : dim_(dim) {
    const std::int32_t n = static_cast<std::int32_t>(points.size());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    if (n > 0) {
        // Median splits on an index permutation; a total order (coordinate,
        // index) keeps the partition deterministic for tied coordinates.
        struct Seg {
            std::int32_t lo, hi;
            int depth;
        };
        std::vector<Seg> work{{0, n, 0}};
        while (!work.empty()) {
            auto [lo, hi, depth] = work.back();
            work.pop_back();
            if (hi - lo <= kLeafSize) continue;
            const int axis = depth % dim_;
            const std::int32_t mid = lo + (hi - lo) / 2;
            std::nth_element(order_.begin() + lo, order_.begin() + mid,
                             order_.begin() + hi,
                             [&](std::int32_t a, std::int32_t b) {
                                 const double ca = points[a][axis], cb = points[b][axis];
                                 return ca != cb ? ca < cb : a < b;
                             });
            work.push_back({lo, mid, depth + 1});
            work.push_back({mid + 1, hi, depth + 1});
        }
    }
    xs_.resize(n);
    ys_.resize(n);
    zs_.resize(n);
    pos_of_.resize(n);
    for (std::int32_t t = 0; t < n; ++t) {
        const Vec3& p = points[order_[t]];
        xs_[t] = p.x;
        ys_[t] = p.y;
        zs_[t] = p.z;
        pos_of_[order_[t]] = t;
    }
}

template <class Visit>
void KdTree::search(Vec3 query, double& worst_d2, Visit&& visit) const {
    struct Frame {
        std::int32_t lo, hi;
        int depth;
        double gap[3];  // per-axis offset from query to the frame's region
        double gap2;    // squared region distance = sum of gap[i]^2
    };
    const std::int32_t n = static_cast<std::int32_t>(order_.size());
    if (n == 0) return;
    std::vector<Frame> stack;
    stack.reserve(64);
    stack.push_back({0, n, 0, {0.0, 0.0, 0.0}, 0.0});
    std::vector<double> buf(kLeafSize);
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.gap2 > worst_d2) continue;
        if (f.hi - f.lo <= kLeafSize) {
            const std::size_t count = f.hi - f.lo;
            kernels::ops().dist2_batch(xs_.data() + f.lo, ys_.data() + f.lo,
                                       zs_.data() + f.lo, count, query.x, query.y,
                                       query.z, buf.data());
            for (std::size_t i = 0; i < count; ++i) visit(buf[i], order_[f.lo + i]);
            continue;
        }
        const std::int32_t mid = f.lo + (f.hi - f.lo) / 2;
        const int axis = f.depth % dim_;
        const double c = axis == 0 ? xs_[mid] : axis == 1 ? ys_[mid] : zs_[mid];
        const double q = axis == 0 ? query.x : axis == 1 ? query.y : query.z;
        const double dx = q - c;
        visit(dist2({xs_[mid], ys_[mid], zs_[mid]}, query), order_[mid]);
        Frame near = f;
        near.depth++;
        Frame far = near;
        if (dx < 0) {
            near.hi = mid;
            far.lo = mid + 1;
            far.hi = f.hi;
        } else {
            near.lo = mid + 1;
            far.lo = f.lo;
            far.hi = mid;
        }
        far.gap2 += dx * dx - far.gap[axis] * far.gap[axis];
        far.gap[axis] = std::abs(dx);
        // Far side first on the stack so the near side is explored first.
        if (far.gap2 <= worst_d2) stack.push_back(far);
        stack.push_back(near);
    }
}

void KdTree::knn(Vec3 query, int k, std::vector<std::int32_t>& idx,
                 std::vector<double>& d2) const {
    const std::int32_t n = static_cast<std::int32_t>(order_.size());
    k = std::min<std::int32_t>(k, n);
    idx.clear();
    d2.clear();
    if (k == 0) return;
    // Bounded max-heap keyed by (distance, index).
    std::vector<HeapEntry> heap;
    heap.reserve(k);
    auto cmp = [](const HeapEntry& a, const HeapEntry& b) {
        return heap_worse(b.d2, b.idx, a.d2, a.idx);  // max-heap: worst on top
    };
    double worst = 1e300;
    search(query, worst, [&](double cand_d2, std::int32_t cand_idx) {
        if (static_cast<int>(heap.size()) < k) {
            heap.push_back({cand_d2, cand_idx});
            std::push_heap(heap.begin(), heap.end(), cmp);
        } else if (heap_worse(heap.front().d2, heap.front().idx, cand_d2, cand_idx)) {
            std::pop_heap(heap.begin(), heap.end(), cmp);
            heap.back() = {cand_d2, cand_idx};
            std::push_heap(heap.begin(), heap.end(), cmp);
        } else {
            return;
        }
        if (static_cast<int>(heap.size()) == k) worst = heap.front().d2;
    });
    std::sort(heap.begin(), heap.end(), [](const HeapEntry& a, const HeapEntry& b) {
        return a.d2 != b.d2 ? a.d2 < b.d2 : a.idx < b.idx;
    });
    for (const auto& e : heap) {
        idx.push_back(e.idx);
        d2.push_back(e.d2);
    }
}

std::int32_t KdTree::nearest(Vec3 query) const {
    double best_d2 = 1e300;
    std::int32_t best = -1;
    search(query, best_d2, [&](double cand_d2, std::int32_t cand_idx) {
        if (cand_d2 < best_d2 || (cand_d2 == best_d2 && cand_idx < best)) {
            best_d2 = cand_d2;
            best = cand_idx;
        }
    });
    return best;
}

std::int32_t KdTree::nearest_if(Vec3 query,
                                const std::function<bool(std::int32_t)>& accept) const {
    double best_d2 = 1e300;
    std::int32_t best = -1;
    search(query, best_d2, [&](double cand_d2, std::int32_t cand_idx) {
        if (!accept(cand_idx)) return;
        if (cand_d2 < best_d2 || (cand_d2 == best_d2 && cand_idx < best)) {
            best_d2 = cand_d2;
            best = cand_idx;
        }
    });
    return best;
}

double KdTree::nearest_other_dist(std::int32_t i) const {
    const std::int32_t t = pos_of_[i];
    const Vec3 q{xs_[t], ys_[t], zs_[t]};
    std::vector<std::int32_t> idx;
    std::vector<double> d2;
    knn(q, 2, idx, d2);
    for (std::size_t j = 0; j < idx.size(); ++j)
        if (idx[j] != i) return std::sqrt(d2[j]);
    return 0.0;
}

StencilTable build_stencils(const NodeSet& nodes, int n) {
    const std::int32_t total = static_cast<std::int32_t>(nodes.size());
    if (n > total) throw StageError("stencil", "stencil larger than node set");
    KdTree tree(nodes.points, nodes.dim);
    StencilTable table;
    table.n = n;
    table.neighbors.resize(static_cast<std::size_t>(total) * n);
    std::vector<std::int32_t> idx;
    std::vector<double> d2;
    for (std::int32_t k = 0; k < total; ++k) {
        tree.knn(nodes.points[k], n, idx, d2);
        // The center is its own closest point (distance 0, index tie-break).
        if (idx[0] != k)
            throw StageError("stencil",
                             "duplicate node detected at index " + std::to_string(k));
        std::copy(idx.begin(), idx.end(), table.neighbors.begin() + std::size_t(k) * n);
    }
    return table;
}

std::vector<std::int32_t> assign_evaluation_points(const NodeSet& eval_points,
                                                   const NodeSet& centers) {
    // Ghost nodes are appended after the regular nodes and never receive
    // evaluation points, so the search runs over the leading non-ghost block.
    std::size_t n_centers = centers.size();
    while (n_centers > 0 && centers.classes[n_centers - 1] == PointClass::Ghost)
        --n_centers;
    for (std::size_t i = 0; i < n_centers; ++i)
        if (centers.classes[i] == PointClass::Ghost)
            throw StageError("stencil", "ghost nodes must be appended after regular nodes");
    if (n_centers == 0) throw StageError("stencil", "no assignable stencil centers");
    std::vector<Vec3> pts(centers.points.begin(), centers.points.begin() + n_centers);
    KdTree tree(pts, centers.dim);
    std::vector<std::int32_t> assign(eval_points.size());
    for (std::size_t i = 0; i < eval_points.size(); ++i)
        assign[i] = tree.nearest(eval_points.points[i]);
    return assign;
}

}  // namespace rbffd
