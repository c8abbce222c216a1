#pragma once

#include <cstddef>
#include <vector>

#include "tgcut/geometry.hpp"
#include "tgcut/maxflow.hpp"
#include "tgcut/volume.hpp"

namespace tgcut {

/// Parameters of the radial graph. Defaults are the published operating point.
struct GraphParams {
    std::size_t k = 40;      // rays
    std::size_t n = 40;      // nodes per ray
    int delta = 2;           // max boundary index change between neighbouring rays
    double t_weight = 0.2;   // contrast sensitivity of the node costs
    double sf = 1.6;         // template scale factor between slices

    void validate() const;
    bool operator==(const GraphParams&) const = default;
};

inline constexpr int kMaxDelta = 2;

/// Row-major k x n matrix of per-node costs.
struct CostMatrix {
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<double> values;

    CostMatrix() = default;
    CostMatrix(std::size_t rays, std::size_t nodes) : k(rays), n(nodes), values(rays * nodes, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return values[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

struct CutResult {
    std::vector<int> boundary;    // outermost source-side node per ray
    std::vector<Point2> contour;  // boundary node positions in ray order
    double cut_cost = 0.0;
    double flow_value = 0.0;
};

/// Everything computed for one slice, kept for overlays and diagnostics.
struct SliceTrace {
    RayFan fan;
    NodeGrid grid;
    CostMatrix costs;
    CutResult cut;
};

/// c[i][j] = exp(-t_weight * |grey difference to the previous node on the ray|);
/// the node before j = 0 is the seed.
CostMatrix node_costs(const NodeGrid& grid, double t_weight);

/// Node id of v_{i,j}; the source is k*n and the sink k*n + 1.
inline std::size_t node_id(std::size_t n, std::size_t ray, std::size_t node) { return ray * n + node; }

/// Closed-set network whose minimum cut minimises sum_i c[i][b_i] subject to
/// |b_i - b_{i+1 mod k}| <= delta.
FlowGraph build_graph(const CostMatrix& costs, int delta);

/// Per-ray boundary indices from a source-side partition. Throws InternalError
/// if a ray's source-side nodes are not a non-empty prefix.
std::vector<int> boundary_from_partition(std::size_t k, std::size_t n, const std::vector<bool>& source_side);

/// Throws InternalError unless every b_i lies in [0, n) and the cyclic delta constraint holds.
void check_feasible(const std::vector<int>& boundary, std::size_t n, int delta);

/// Boundary, contour and cost of a solved graph built from `grid`.
CutResult extract_cut(const NodeGrid& grid, const MaxFlowResult& flow, int delta, double inf_capacity);

/// Boundary minimising sum_i c[i][b_i] via build_graph + max_flow.
CutResult min_cut_boundary(const CostMatrix& costs, int delta);

/// Objective of a boundary vector.
double boundary_cost(const CostMatrix& costs, const std::vector<int>& boundary);

SliceTrace trace_one_slice(const Slice2D& slice, const Template& tmpl, const SeedPoint& seed,
                           const GraphParams& params);

CutResult segment_one_slice(const Slice2D& slice, const Template& tmpl, const SeedPoint& seed,
                            const GraphParams& params);

} // namespace tgcut
