#include "asc/tensor.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asc {
namespace {

std::size_t shape_size(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int e : shape) {
        if (e <= 0) throw std::invalid_argument("tensor extents must be positive");
        n *= static_cast<std::size_t>(e);
    }
    return n;
}

void check_finite(const TensorPtr& t, const char* op) {
    for (double v : t->data) {
        if (!std::isfinite(v)) {
            throw std::runtime_error(std::string("non-finite value produced by ") + op);
        }
    }
}

bool wants_grad(const TensorPtr& t) { return t->requires_grad || t->needs_grad; }

TensorPtr out_like(std::vector<int> shape, bool needs) {
    TensorPtr t = make_tensor(std::move(shape));
    t->needs_grad = needs;
    if (needs) t->ensure_grad();
    return t;
}

} // namespace

double Tensor::scalar() const {
    if (size() != 1) throw std::invalid_argument("scalar() on non-scalar tensor");
    return data[0];
}

void Tensor::ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
}

void Tensor::zero_grad() { grad.assign(data.size(), 0.0); }

TensorPtr make_tensor(std::vector<int> shape, bool requires_grad) {
    auto t = std::make_shared<Tensor>();
    std::size_t n = shape_size(shape);
    t->shape = std::move(shape);
    t->data.assign(n, 0.0);
    t->requires_grad = requires_grad;
    if (requires_grad) t->ensure_grad();
    return t;
}

TensorPtr make_tensor(std::vector<int> shape, std::vector<double> data, bool requires_grad) {
    auto t = std::make_shared<Tensor>();
    if (shape_size(shape) != data.size()) {
        throw std::invalid_argument("tensor data length does not match shape");
    }
    t->shape = std::move(shape);
    t->data = std::move(data);
    t->requires_grad = requires_grad;
    if (requires_grad) t->ensure_grad();
    return t;
}

TensorPtr scalar_tensor(double value, bool requires_grad) {
    return make_tensor({1, 1}, {value}, requires_grad);
}

void Graph::backward(const TensorPtr& loss) {
    if (loss->size() != 1) throw std::invalid_argument("backward() requires a scalar loss");
    loss->ensure_grad();
    loss->grad[0] += 1.0;
    for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) (*it)();
}

// ---- ops ---------------------------------------------------------------

TensorPtr matmul(Graph& g, const TensorPtr& a, const TensorPtr& b) {
    const int m = a->rows(), k = a->cols(), k2 = b->rows(), n = b->cols();
    if (k != k2) throw std::invalid_argument("matmul: inner extents mismatch");
    bool needs = wants_grad(a) || wants_grad(b);
    TensorPtr out = out_like({m, n}, needs);
    const double* ad = a->data.data();
    const double* bd = b->data.data();
    double* od = out->data.data();
    for (int i = 0; i < m; ++i) {
        for (int p = 0; p < k; ++p) {
            const double av = ad[i * k + p];
            if (av == 0.0) continue;
            const double* brow = bd + p * n;
            double* orow = od + i * n;
            for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    check_finite(out, "matmul");
    if (needs) {
        g.record([a, b, out, m, k, n]() {
            const double* gd = out->grad.data();
            if (a->requires_grad || a->needs_grad) {
                a->ensure_grad();
                // dA = G * B^T
                for (int i = 0; i < m; ++i)
                    for (int p = 0; p < k; ++p) {
                        double s = 0.0;
                        const double* grow = gd + i * n;
                        const double* brow = b->data.data() + p * n;
                        for (int j = 0; j < n; ++j) s += grow[j] * brow[j];
                        a->grad[i * k + p] += s;
                    }
            }
            if (b->requires_grad || b->needs_grad) {
                b->ensure_grad();
                // dB = A^T * G
                for (int i = 0; i < m; ++i) {
                    const double* arow = a->data.data() + i * k;
                    const double* grow = gd + i * n;
                    for (int p = 0; p < k; ++p) {
                        const double av = arow[p];
                        if (av == 0.0) continue;
                        double* brow = b->grad.data() + p * n;
                        for (int j = 0; j < n; ++j) brow[j] += av * grow[j];
                    }
                }
            }
        });
    }
    return out;
}

TensorPtr transpose(Graph& g, const TensorPtr& a) {
    const int m = a->rows(), n = a->cols();
    bool needs = wants_grad(a);
    TensorPtr out = out_like({n, m}, needs);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out->data[j * m + i] = a->data[i * n + j];
    if (needs) {
        g.record([a, out, m, n]() {
            a->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) a->grad[i * n + j] += out->grad[j * m + i];
        });
    }
    return out;
}

namespace {

TensorPtr elementwise_binary(Graph& g, const TensorPtr& a, const TensorPtr& b,
                             const char* name, double (*fwd)(double, double),
                             void (*bwd)(double, double, double, double&, double&)) {
    if (a->shape != b->shape) {
        throw std::invalid_argument(std::string(name) + ": shape mismatch");
    }
    bool needs = wants_grad(a) || wants_grad(b);
    TensorPtr out = out_like(a->shape, needs);
    for (std::size_t i = 0; i < out->size(); ++i) out->data[i] = fwd(a->data[i], b->data[i]);
    check_finite(out, name);
    if (needs) {
        g.record([a, b, out, bwd]() {
            bool ga = a->requires_grad || a->needs_grad;
            bool gb = b->requires_grad || b->needs_grad;
            if (ga) a->ensure_grad();
            if (gb) b->ensure_grad();
            double dummy = 0.0;
            for (std::size_t i = 0; i < out->size(); ++i) {
                double& ra = ga ? a->grad[i] : dummy;
                double& rb = gb ? b->grad[i] : dummy;
                bwd(a->data[i], b->data[i], out->grad[i], ra, rb);
            }
        });
    }
    return out;
}

} // namespace

TensorPtr add(Graph& g, const TensorPtr& a, const TensorPtr& b) {
    return elementwise_binary(
        g, a, b, "add", [](double x, double y) { return x + y; },
        [](double, double, double gr, double& da, double& db) {
            da += gr;
            db += gr;
        });
}

TensorPtr sub(Graph& g, const TensorPtr& a, const TensorPtr& b) {
    return elementwise_binary(
        g, a, b, "sub", [](double x, double y) { return x - y; },
        [](double, double, double gr, double& da, double& db) {
            da += gr;
            db -= gr;
        });
}

TensorPtr mul(Graph& g, const TensorPtr& a, const TensorPtr& b) {
    return elementwise_binary(
        g, a, b, "mul", [](double x, double y) { return x * y; },
        [](double x, double y, double gr, double& da, double& db) {
            da += gr * y;
            db += gr * x;
        });
}

TensorPtr scale(Graph& g, const TensorPtr& a, double c) {
    bool needs = wants_grad(a);
    TensorPtr out = out_like(a->shape, needs);
    for (std::size_t i = 0; i < out->size(); ++i) out->data[i] = a->data[i] * c;
    check_finite(out, "scale");
    if (needs) {
        g.record([a, out, c]() {
            a->ensure_grad();
            for (std::size_t i = 0; i < out->size(); ++i) a->grad[i] += out->grad[i] * c;
        });
    }
    return out;
}

TensorPtr sub_broadcast_scalar(Graph& g, const TensorPtr& a, const TensorPtr& s) {
    if (s->size() != 1) throw std::invalid_argument("sub_broadcast_scalar: s must be scalar");
    bool needs = wants_grad(a) || wants_grad(s);
    TensorPtr out = out_like(a->shape, needs);
    const double sv = s->data[0];
    for (std::size_t i = 0; i < out->size(); ++i) out->data[i] = a->data[i] - sv;
    check_finite(out, "sub_broadcast_scalar");
    if (needs) {
        g.record([a, s, out]() {
            bool ga = a->requires_grad || a->needs_grad;
            bool gs = s->requires_grad || s->needs_grad;
            if (ga) a->ensure_grad();
            if (gs) s->ensure_grad();
            for (std::size_t i = 0; i < out->size(); ++i) {
                if (ga) a->grad[i] += out->grad[i];
                if (gs) s->grad[0] -= out->grad[i];
            }
        });
    }
    return out;
}

TensorPtr sigmoid(Graph& g, const TensorPtr& a) {
    bool needs = wants_grad(a);
    TensorPtr out = out_like(a->shape, needs);
    for (std::size_t i = 0; i < out->size(); ++i) {
        const double x = a->data[i];
        out->data[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                                : std::exp(x) / (1.0 + std::exp(x));
    }
    check_finite(out, "sigmoid");
    if (needs) {
        g.record([a, out]() {
            a->ensure_grad();
            for (std::size_t i = 0; i < out->size(); ++i) {
                const double y = out->data[i];
                a->grad[i] += out->grad[i] * y * (1.0 - y);
            }
        });
    }
    return out;
}

TensorPtr gelu(Graph& g, const TensorPtr& a) {
    bool needs = wants_grad(a);
    TensorPtr out = out_like(a->shape, needs);
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    for (std::size_t i = 0; i < out->size(); ++i) {
        const double x = a->data[i];
        out->data[i] = 0.5 * x * (1.0 + std::erf(x * inv_sqrt2));
    }
    check_finite(out, "gelu");
    if (needs) {
        g.record([a, out]() {
            a->ensure_grad();
            constexpr double inv_sqrt2pi = 0.3989422804014326779;
            for (std::size_t i = 0; i < out->size(); ++i) {
                const double x = a->data[i];
                const double cdf = 0.5 * (1.0 + std::erf(x * inv_sqrt2));
                const double pdf = inv_sqrt2pi * std::exp(-0.5 * x * x);
                a->grad[i] += out->grad[i] * (cdf + x * pdf);
            }
        });
    }
    return out;
}

namespace {

// Shared kernel for plain and key-masked row softmax. An empty mask means
// every column is valid.
TensorPtr softmax_rows_impl(Graph& g, const TensorPtr& a, std::vector<int> key_mask) {
    const int m = a->rows(), n = a->cols();
    if (!key_mask.empty() && static_cast<int>(key_mask.size()) != n) {
        throw std::invalid_argument("masked_softmax_rows: mask length mismatch");
    }
    bool any_valid = key_mask.empty();
    for (int v : key_mask) any_valid = any_valid || v != 0;
    if (!any_valid) throw std::invalid_argument("masked_softmax_rows: all keys masked");
    bool needs = wants_grad(a);
    TensorPtr out = out_like({m, n}, needs);
    auto valid = [&key_mask](int j) { return key_mask.empty() || key_mask[j] != 0; };
    for (int i = 0; i < m; ++i) {
        double mx = -1e300;
        for (int j = 0; j < n; ++j)
            if (valid(j)) mx = std::max(mx, a->at(i, j));
        double z = 0.0;
        for (int j = 0; j < n; ++j) {
            double e = valid(j) ? std::exp(a->at(i, j) - mx) : 0.0;
            out->at(i, j) = e;
            z += e;
        }
        for (int j = 0; j < n; ++j) out->at(i, j) /= z;
    }
    check_finite(out, "softmax_rows");
    if (needs) {
        g.record([a, out, m, n]() {
            a->ensure_grad();
            for (int i = 0; i < m; ++i) {
                double dotv = 0.0;
                for (int j = 0; j < n; ++j) dotv += out->grad[i * n + j] * out->data[i * n + j];
                for (int j = 0; j < n; ++j) {
                    a->grad[i * n + j] +=
                        out->data[i * n + j] * (out->grad[i * n + j] - dotv);
                }
            }
        });
    }
    return out;
}

} // namespace

TensorPtr softmax_rows(Graph& g, const TensorPtr& a) {
    return softmax_rows_impl(g, a, {});
}

TensorPtr masked_softmax_rows(Graph& g, const TensorPtr& a, const std::vector<int>& key_mask) {
    return softmax_rows_impl(g, a, key_mask);
}

TensorPtr layer_norm(Graph& g, const TensorPtr& x, const TensorPtr& gain,
                     const TensorPtr& bias, double eps) {
    const int m = x->rows(), n = x->cols();
    if (gain->size() != static_cast<std::size_t>(n) || bias->size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("layer_norm: gain/bias length mismatch");
    }
    bool needs = wants_grad(x) || wants_grad(gain) || wants_grad(bias);
    TensorPtr out = out_like({m, n}, needs);
    // normalized activations saved for backward
    auto xhat = std::make_shared<std::vector<double>>(static_cast<std::size_t>(m) * n);
    auto inv_sigma = std::make_shared<std::vector<double>>(m);
    for (int i = 0; i < m; ++i) {
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += x->at(i, j);
        mean /= n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = x->at(i, j) - mean;
            var += d * d;
        }
        var /= n;
        const double is = 1.0 / std::sqrt(var + eps);
        (*inv_sigma)[i] = is;
        for (int j = 0; j < n; ++j) {
            const double h = (x->at(i, j) - mean) * is;
            (*xhat)[i * n + j] = h;
            out->at(i, j) = h * gain->data[j] + bias->data[j];
        }
    }
    check_finite(out, "layer_norm");
    if (needs) {
        g.record([x, gain, bias, out, xhat, inv_sigma, m, n]() {
            bool gx = x->requires_grad || x->needs_grad;
            bool gg = gain->requires_grad || gain->needs_grad;
            bool gb = bias->requires_grad || bias->needs_grad;
            if (gx) x->ensure_grad();
            if (gg) gain->ensure_grad();
            if (gb) bias->ensure_grad();
            for (int i = 0; i < m; ++i) {
                double sum_dh = 0.0, sum_dh_h = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double go = out->grad[i * n + j];
                    const double h = (*xhat)[i * n + j];
                    if (gg) gain->grad[j] += go * h;
                    if (gb) bias->grad[j] += go;
                    const double dh = go * gain->data[j];
                    sum_dh += dh;
                    sum_dh_h += dh * h;
                }
                if (gx) {
                    const double is = (*inv_sigma)[i];
                    for (int j = 0; j < n; ++j) {
                        const double dh = out->grad[i * n + j] * gain->data[j];
                        const double h = (*xhat)[i * n + j];
                        x->grad[i * n + j] +=
                            is * (dh - sum_dh / n - h * sum_dh_h / n);
                    }
                }
            }
        });
    }
    return out;
}

TensorPtr l2_normalize_rows(Graph& g, const TensorPtr& x, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("l2_normalize_rows: eps must be positive");
    const int m = x->rows(), n = x->cols();
    bool needs = wants_grad(x);
    TensorPtr out = out_like({m, n}, needs);
    auto denom = std::make_shared<std::vector<double>>(m);
    auto clipped = std::make_shared<std::vector<char>>(m);
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += x->at(i, j) * x->at(i, j);
        const double norm = std::sqrt(s);
        const double d = std::max(norm, eps);
        (*denom)[i] = d;
        (*clipped)[i] = norm < eps ? 1 : 0;
        for (int j = 0; j < n; ++j) out->at(i, j) = x->at(i, j) / d;
    }
    check_finite(out, "l2_normalize_rows");
    if (needs) {
        g.record([x, out, denom, clipped, m, n]() {
            x->ensure_grad();
            for (int i = 0; i < m; ++i) {
                const double d = (*denom)[i];
                if ((*clipped)[i]) {
                    // below eps the denominator is constant
                    for (int j = 0; j < n; ++j) x->grad[i * n + j] += out->grad[i * n + j] / d;
                    continue;
                }
                double dotv = 0.0;
                for (int j = 0; j < n; ++j) dotv += out->grad[i * n + j] * out->data[i * n + j];
                for (int j = 0; j < n; ++j) {
                    x->grad[i * n + j] +=
                        (out->grad[i * n + j] - out->data[i * n + j] * dotv) / d;
                }
            }
        });
    }
    return out;
}

namespace {

TensorPtr mean_rows_impl(Graph& g, const TensorPtr& x, std::vector<int> row_mask) {
    const int m = x->rows(), n = x->cols();
    if (!row_mask.empty() && static_cast<int>(row_mask.size()) != m) {
        throw std::invalid_argument("masked_mean_rows: mask length mismatch");
    }
    int count = 0;
    for (int i = 0; i < m; ++i)
        if (row_mask.empty() || row_mask[i] != 0) ++count;
    if (count == 0) throw std::invalid_argument("masked_mean_rows: no valid rows");
    bool needs = wants_grad(x);
    TensorPtr out = out_like({1, n}, needs);
    for (int i = 0; i < m; ++i) {
        if (!row_mask.empty() && row_mask[i] == 0) continue;
        for (int j = 0; j < n; ++j) out->data[j] += x->at(i, j);
    }
    for (int j = 0; j < n; ++j) out->data[j] /= count;
    check_finite(out, "mean_rows");
    if (needs) {
        auto mask = std::make_shared<std::vector<int>>(std::move(row_mask));
        g.record([x, out, mask, m, n, count]() {
            x->ensure_grad();
            for (int i = 0; i < m; ++i) {
                if (!mask->empty() && (*mask)[i] == 0) continue;
                for (int j = 0; j < n; ++j) x->grad[i * n + j] += out->grad[j] / count;
            }
        });
    }
    return out;
}

} // namespace

TensorPtr mean_rows(Graph& g, const TensorPtr& x) { return mean_rows_impl(g, x, {}); }

TensorPtr masked_mean_rows(Graph& g, const TensorPtr& x, const std::vector<int>& row_mask) {
    return mean_rows_impl(g, x, row_mask);
}

TensorPtr sum_all(Graph& g, const TensorPtr& x) {
    bool needs = wants_grad(x);
    TensorPtr out = out_like({1, 1}, needs);
    out->data[0] = std::accumulate(x->data.begin(), x->data.end(), 0.0);
    check_finite(out, "sum_all");
    if (needs) {
        g.record([x, out]() {
            x->ensure_grad();
            for (std::size_t i = 0; i < x->size(); ++i) x->grad[i] += out->grad[0];
        });
    }
    return out;
}

TensorPtr dot(Graph& g, const TensorPtr& a, const TensorPtr& b) {
    if (a->size() != b->size()) throw std::invalid_argument("dot: length mismatch");
    bool needs = wants_grad(a) || wants_grad(b);
    TensorPtr out = out_like({1, 1}, needs);
    double s = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i) s += a->data[i] * b->data[i];
    out->data[0] = s;
    check_finite(out, "dot");
    if (needs) {
        g.record([a, b, out]() {
            bool ga = a->requires_grad || a->needs_grad;
            bool gb = b->requires_grad || b->needs_grad;
            if (ga) a->ensure_grad();
            if (gb) b->ensure_grad();
            for (std::size_t i = 0; i < a->size(); ++i) {
                if (ga) a->grad[i] += out->grad[0] * b->data[i];
                if (gb) b->grad[i] += out->grad[0] * a->data[i];
            }
        });
    }
    return out;
}

TensorPtr add_rowvec(Graph& g, const TensorPtr& x, const TensorPtr& bias) {
    const int m = x->rows(), n = x->cols();
    if (bias->size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("add_rowvec: bias length mismatch");
    }
    bool needs = wants_grad(x) || wants_grad(bias);
    TensorPtr out = out_like({m, n}, needs);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out->at(i, j) = x->at(i, j) + bias->data[j];
    check_finite(out, "add_rowvec");
    if (needs) {
        g.record([x, bias, out, m, n]() {
            bool gx = x->requires_grad || x->needs_grad;
            bool gb = bias->requires_grad || bias->needs_grad;
            if (gx) x->ensure_grad();
            if (gb) bias->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) {
                    if (gx) x->grad[i * n + j] += out->grad[i * n + j];
                    if (gb) bias->grad[j] += out->grad[i * n + j];
                }
        });
    }
    return out;
}

TensorPtr slice_cols(Graph& g, const TensorPtr& x, int start, int len) {
    const int m = x->rows(), n = x->cols();
    if (start < 0 || len <= 0 || start + len > n) {
        throw std::invalid_argument("slice_cols: range out of bounds");
    }
    bool needs = wants_grad(x);
    TensorPtr out = out_like({m, len}, needs);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < len; ++j) out->at(i, j) = x->at(i, start + j);
    if (needs) {
        g.record([x, out, start, len, m, n]() {
            x->ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < len; ++j)
                    x->grad[i * n + start + j] += out->grad[i * len + j];
        });
    }
    return out;
}

TensorPtr concat_cols(Graph& g, const std::vector<TensorPtr>& parts) {
    if (parts.empty()) throw std::invalid_argument("concat_cols: empty input");
    const int m = parts[0]->rows();
    int n = 0;
    for (const auto& p : parts) {
        if (p->rows() != m) throw std::invalid_argument("concat_cols: row count mismatch");
        n += p->cols();
    }
    bool needs = false;
    for (const auto& p : parts) needs = needs || wants_grad(p);
    TensorPtr out = out_like({m, n}, needs);
    int off = 0;
    for (const auto& p : parts) {
        const int w = p->cols();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < w; ++j) out->at(i, off + j) = p->at(i, j);
        off += w;
    }
    if (needs) {
        auto copies = parts;
        g.record([copies, out, m, n]() {
            int off = 0;
            for (const auto& p : copies) {
                const int w = p->cols();
                if (p->requires_grad || p->needs_grad) {
                    p->ensure_grad();
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < w; ++j)
                            p->grad[i * w + j] += out->grad[i * n + off + j];
                }
                off += w;
            }
        });
    }
    return out;
}

TensorPtr gather_rows(Graph& g, const TensorPtr& x, const std::vector<int>& idx) {
    const int m = x->rows(), n = x->cols();
    for (int i : idx) {
        if (i < 0 || i >= m) throw std::invalid_argument("gather_rows: index out of range");
    }
    bool needs = wants_grad(x);
    TensorPtr out = out_like({static_cast<int>(idx.size()), n}, needs);
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (int j = 0; j < n; ++j) out->at(static_cast<int>(r), j) = x->at(idx[r], j);
    if (needs) {
        auto indices = std::make_shared<std::vector<int>>(idx);
        g.record([x, out, indices, n]() {
            x->ensure_grad();
            for (std::size_t r = 0; r < indices->size(); ++r)
                for (int j = 0; j < n; ++j)
                    x->grad[(*indices)[r] * n + j] += out->grad[r * n + j];
        });
    }
    return out;
}

TensorPtr mask_rows(Graph& g, const TensorPtr& x, const std::vector<int>& row_mask) {
    const int m = x->rows(), n = x->cols();
    if (static_cast<int>(row_mask.size()) != m) {
        throw std::invalid_argument("mask_rows: mask length mismatch");
    }
    bool needs = wants_grad(x);
    TensorPtr out = out_like({m, n}, needs);
    for (int i = 0; i < m; ++i) {
        if (row_mask[i] == 0) continue;
        for (int j = 0; j < n; ++j) out->at(i, j) = x->at(i, j);
    }
    if (needs) {
        auto mask = std::make_shared<std::vector<int>>(row_mask);
        g.record([x, out, mask, m, n]() {
            x->ensure_grad();
            for (int i = 0; i < m; ++i) {
                if ((*mask)[i] == 0) continue;
                for (int j = 0; j < n; ++j) x->grad[i * n + j] += out->grad[i * n + j];
            }
        });
    }
    return out;
}

TensorPtr stop_gradient(const TensorPtr& x) {
    return make_tensor(x->shape, x->data, false);
}

} // namespace asc
