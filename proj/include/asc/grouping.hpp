#pragma once

// Token grouping: affinity graph, learnable gate, connected components, and
// the component merge that shrinks the token sequence. Includes the merge
// ablation variants (max pooling, bipartite pair merging).

#include "asc/tensor.hpp"

#include <cstdint>
#include <vector>

namespace asc {

// Tokens in the same component carry the same label; labels are assigned in
// order of each component's lowest-index member.
struct Partition {
    std::vector<int> labels;
    int count = 0;
    std::vector<std::vector<int>> members;
};

// Symmetric boolean adjacency, diagonal excluded from the edge set.
struct BoolAdjacency {
    int n = 0;
    std::vector<char> edges; // n*n, row-major

    bool edge(int i, int j) const { return edges[static_cast<std::size_t>(i) * n + j] != 0; }
    void set_edge(int i, int j, bool v) {
        edges[static_cast<std::size_t>(i) * n + j] = v ? 1 : 0;
        edges[static_cast<std::size_t>(j) * n + i] = v ? 1 : 0;
    }
    int edge_count() const;
};

// Elementary-operation counters backing the quadratic-cost check.
struct OpCounter {
    std::int64_t similarity_ops = 0; // multiply-adds in Z Z^T
    std::int64_t binarize_ops = 0;   // pairwise threshold comparisons
    std::int64_t traversal_ops = 0;  // DFS neighbor probes
    std::int64_t total() const { return similarity_ops + binarize_ops + traversal_ops; }
};

// S = Z Z^T, symmetric, differentiable in Z.
TensorPtr similarity(Graph& g, const TensorPtr& z, OpCounter* counter = nullptr);

// A = sigmoid(S - theta), differentiable in both.
TensorPtr gate(Graph& g, const TensorPtr& s, const TensorPtr& theta);

// E_ij = (A_ij > edge_cut) for i != j. A must be symmetric.
BoolAdjacency binarize(const TensorPtr& a, double edge_cut, OpCounter* counter = nullptr);

// Reachability equivalence classes via iterative depth-first search.
// Throws on an asymmetric adjacency.
Partition components(const BoolAdjacency& adj, OpCounter* counter = nullptr);

// Mean pool each component's member rows; backward splits the gradient
// evenly across members. The partition itself is treated as constant.
TensorPtr merge_mean(Graph& g, const TensorPtr& z, const Partition& part);

// Elementwise max per component; gradient routes to the argmax member.
TensorPtr merge_max(Graph& g, const TensorPtr& z, const Partition& part);

// Bipartite pair merging baseline: alternate tokens into sets A/B, each
// A-token proposes its most similar B-token, the r strongest proposals merge
// by averaging into the destination token. Ties break toward lower index.
TensorPtr merge_tome(Graph& g, const TensorPtr& z, int r);

// Group structure merge_tome would apply, without performing the merge.
Partition tome_groups(const TensorPtr& z, int r);

// Differentiable proxy letting theta train despite the hard partition:
// mean of A over within-component off-diagonal pairs minus mean of A over
// cross-component pairs. Either mean is 0 when it has no pairs.
TensorPtr partition_agreement(Graph& g, const TensorPtr& a, const Partition& part);

enum class MergeMode { Mean, Max, Tome };

struct AscLayerOptions {
    double edge_cut = 0.5;
    double surrogate_lambda = 0.1;
    MergeMode merge = MergeMode::Mean;
    int tome_r = 0; // only for MergeMode::Tome
};

struct AscLayerResult {
    TensorPtr tokens;    // N~ x d
    Partition partition;
    TensorPtr surrogate; // scalar, lambda * partition_agreement; add to the loss
    int edge_count = 0;
};

// similarity -> gate -> binarize -> components -> merge. `affinity` is the
// matrix the graph is built from (the tokens themselves, or attention keys).
AscLayerResult asc_layer(Graph& g, const TensorPtr& tokens, const TensorPtr& affinity,
                         const TensorPtr& theta, const AscLayerOptions& opt,
                         OpCounter* counter = nullptr);

} // namespace asc
