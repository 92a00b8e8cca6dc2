#pragma once

// Dense double-precision tensors with define-by-run reverse-mode
// differentiation. The tape is rebuilt on every forward pass; token counts
// change between steps, so there is no static graph to cache.

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace asc {

struct Tensor {
    std::vector<int> shape;     // row-major extents, rank 2 for all model math
    std::vector<double> data;
    bool requires_grad = false; // leaf parameter flag
    bool needs_grad = false;    // set when any ancestor requires grad
    std::vector<double> grad;   // allocated lazily, same size as data

    int rows() const { return shape.empty() ? 1 : shape[0]; }
    int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
    std::size_t size() const { return data.size(); }

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols() + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols() + c]; }

    double scalar() const;
    void ensure_grad();
    void zero_grad();
};

using TensorPtr = std::shared_ptr<Tensor>;

TensorPtr make_tensor(std::vector<int> shape, bool requires_grad = false);
TensorPtr make_tensor(std::vector<int> shape, std::vector<double> data,
                      bool requires_grad = false);
TensorPtr scalar_tensor(double value, bool requires_grad = false);

// Records backward closures in forward order; backward() replays them in
// reverse. One Graph per forward pass, owned by whoever runs the pass.
class Graph {
public:
    void record(std::function<void()> fn) { tape_.push_back(std::move(fn)); }
    std::size_t size() const { return tape_.size(); }
    void clear() { tape_.clear(); }

    // Seeds loss->grad with 1 and replays the tape. Loss must be scalar.
    void backward(const TensorPtr& loss);

private:
    std::vector<std::function<void()>> tape_;
};

// ---- op set ------------------------------------------------------------
// Every op validates shapes, checks output finiteness, and registers a
// backward rule when an input carries gradient.

TensorPtr matmul(Graph& g, const TensorPtr& a, const TensorPtr& b);
TensorPtr transpose(Graph& g, const TensorPtr& a);
TensorPtr add(Graph& g, const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(Graph& g, const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(Graph& g, const TensorPtr& a, const TensorPtr& b);
TensorPtr scale(Graph& g, const TensorPtr& a, double c);
// a - s broadcast over every element; s is a 1x1 tensor (the gate threshold)
TensorPtr sub_broadcast_scalar(Graph& g, const TensorPtr& a, const TensorPtr& s);
TensorPtr sigmoid(Graph& g, const TensorPtr& a);
TensorPtr gelu(Graph& g, const TensorPtr& a);
TensorPtr softmax_rows(Graph& g, const TensorPtr& a);
// key_mask[j] == 0 forces column j to zero probability in every row
TensorPtr masked_softmax_rows(Graph& g, const TensorPtr& a,
                              const std::vector<int>& key_mask);
TensorPtr layer_norm(Graph& g, const TensorPtr& x, const TensorPtr& gain,
                     const TensorPtr& bias, double eps = 1e-5);
TensorPtr l2_normalize_rows(Graph& g, const TensorPtr& x, double eps = 1e-12);
TensorPtr mean_rows(Graph& g, const TensorPtr& x);                       // 1 x d
TensorPtr masked_mean_rows(Graph& g, const TensorPtr& x,
                           const std::vector<int>& row_mask);
TensorPtr sum_all(Graph& g, const TensorPtr& x);                         // 1 x 1
TensorPtr dot(Graph& g, const TensorPtr& a, const TensorPtr& b);         // 1 x 1
TensorPtr add_rowvec(Graph& g, const TensorPtr& x, const TensorPtr& bias);
TensorPtr slice_cols(Graph& g, const TensorPtr& x, int start, int len);
TensorPtr concat_cols(Graph& g, const std::vector<TensorPtr>& parts);
TensorPtr gather_rows(Graph& g, const TensorPtr& x, const std::vector<int>& idx);
TensorPtr mask_rows(Graph& g, const TensorPtr& x, const std::vector<int>& row_mask);

// Value copy detached from the tape; gradient never flows through.
TensorPtr stop_gradient(const TensorPtr& x);

} // namespace asc
