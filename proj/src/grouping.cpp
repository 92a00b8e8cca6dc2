#include "asc/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace asc {

int BoolAdjacency::edge_count() const {
    int c = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge(i, j)) ++c;
    return c;
}

TensorPtr similarity(Graph& g, const TensorPtr& z, OpCounter* counter) {
    if (z->rows() < 1) throw std::invalid_argument("similarity: need at least one token");
    if (counter) {
        counter->similarity_ops += static_cast<std::int64_t>(z->rows()) * z->rows() * z->cols();
    }
    return matmul(g, z, transpose(g, z));
}

TensorPtr gate(Graph& g, const TensorPtr& s, const TensorPtr& theta) {
    return sigmoid(g, sub_broadcast_scalar(g, s, theta));
}

BoolAdjacency binarize(const TensorPtr& a, double edge_cut, OpCounter* counter) {
    const int n = a->rows();
    if (a->cols() != n) throw std::invalid_argument("binarize: adjacency must be square");
    BoolAdjacency adj;
    adj.n = n;
    adj.edges.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            adj.edges[static_cast<std::size_t>(i) * n + j] = a->at(i, j) > edge_cut ? 1 : 0;
        }
    }
    if (counter) counter->binarize_ops += static_cast<std::int64_t>(n) * n;
    return adj;
}

Partition components(const BoolAdjacency& adj, OpCounter* counter) {
    const int n = adj.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (adj.edge(i, j) != adj.edge(j, i)) {
                throw std::invalid_argument("components: adjacency must be symmetric");
            }
    Partition part;
    part.labels.assign(n, -1);
    std::vector<int> stack;
    for (int root = 0; root < n; ++root) {
        if (part.labels[root] != -1) continue;
        const int label = part.count++;
        part.members.emplace_back();
        // explicit stack instead of recursion; the recursive form overflows
        // on long chains at large N
        stack.push_back(root);
        part.labels[root] = label;
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            part.members[label].push_back(node);
            // push in descending order so the lowest-index neighbor is
            // expanded first
            for (int nbr = n - 1; nbr >= 0; --nbr) {
                if (counter) ++counter->traversal_ops;
                if (adj.edge(node, nbr) && part.labels[nbr] == -1) {
                    part.labels[nbr] = label;
                    stack.push_back(nbr);
                }
            }
        }
        std::sort(part.members[label].begin(), part.members[label].end());
    }
    return part;
}

TensorPtr merge_mean(Graph& g, const TensorPtr& z, const Partition& part) {
    const int n = z->rows(), d = z->cols();
    if (static_cast<int>(part.labels.size()) != n) {
        throw std::invalid_argument("merge_mean: partition does not cover the token set");
    }
    for (const auto& m : part.members) {
        if (m.empty()) throw std::invalid_argument("merge_mean: empty component");
    }
    bool needs = z->requires_grad || z->needs_grad;
    TensorPtr out = make_tensor({part.count, d});
    out->needs_grad = needs;
    if (needs) out->ensure_grad();
    for (int k = 0; k < part.count; ++k) {
        const double inv = 1.0 / part.members[k].size();
        for (int i : part.members[k])
            for (int j = 0; j < d; ++j) out->at(k, j) += z->at(i, j) * inv;
    }
    if (needs) {
        auto members = std::make_shared<std::vector<std::vector<int>>>(part.members);
        g.record([z, out, members, d]() {
            z->ensure_grad();
            for (std::size_t k = 0; k < members->size(); ++k) {
                const double inv = 1.0 / (*members)[k].size();
                for (int i : (*members)[k])
                    for (int j = 0; j < d; ++j)
                        z->grad[i * d + j] += out->grad[k * d + j] * inv;
            }
        });
    }
    return out;
}

TensorPtr merge_max(Graph& g, const TensorPtr& z, const Partition& part) {
    const int n = z->rows(), d = z->cols();
    if (static_cast<int>(part.labels.size()) != n) {
        throw std::invalid_argument("merge_max: partition does not cover the token set");
    }
    bool needs = z->requires_grad || z->needs_grad;
    TensorPtr out = make_tensor({part.count, d});
    out->needs_grad = needs;
    if (needs) out->ensure_grad();
    auto argmax = std::make_shared<std::vector<int>>(static_cast<std::size_t>(part.count) * d);
    for (int k = 0; k < part.count; ++k) {
        for (int j = 0; j < d; ++j) {
            int best = part.members[k][0];
            for (int i : part.members[k])
                if (z->at(i, j) > z->at(best, j)) best = i;
            out->at(k, j) = z->at(best, j);
            (*argmax)[static_cast<std::size_t>(k) * d + j] = best;
        }
    }
    if (needs) {
        g.record([z, out, argmax, d]() {
            z->ensure_grad();
            for (int k = 0; k < out->rows(); ++k)
                for (int j = 0; j < d; ++j) {
                    const int i = (*argmax)[static_cast<std::size_t>(k) * d + j];
                    z->grad[i * d + j] += out->grad[k * d + j];
                }
        });
    }
    return out;
}

Partition tome_groups(const TensorPtr& z, int r) {
    const int n = z->rows(), d = z->cols();
    if (r < 0 || r > n / 2) throw std::invalid_argument("merge_tome: r out of range");
    // alternate assignment: even indices -> set A (proposers), odd -> set B
    std::vector<int> set_a, set_b;
    for (int i = 0; i < n; ++i) (i % 2 == 0 ? set_a : set_b).push_back(i);

    struct Proposal {
        double sim;
        int a, b;
    };
    std::vector<Proposal> proposals;
    for (int a : set_a) {
        if (set_b.empty()) break;
        int best = set_b[0];
        double best_sim = -1e300;
        for (int b : set_b) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += z->at(a, j) * z->at(b, j);
            if (s > best_sim) {
                best_sim = s;
                best = b;
            }
        }
        proposals.push_back({best_sim, a, best});
    }
    std::stable_sort(proposals.begin(), proposals.end(), [](const Proposal& x, const Proposal& y) {
        if (x.sim != y.sim) return x.sim > y.sim;
        return x.a < y.a;
    });
    if (r > static_cast<int>(proposals.size())) {
        throw std::invalid_argument("merge_tome: r exceeds proposal count");
    }

    // groups keyed by destination token; unmerged tokens are singleton groups
    std::vector<std::vector<int>> group_of(n);
    for (int i = 0; i < n; ++i) group_of[i] = {i};
    std::vector<char> merged_away(n, 0);
    for (int k = 0; k < r; ++k) {
        group_of[proposals[k].b].push_back(proposals[k].a);
        merged_away[proposals[k].a] = 1;
    }
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
        if (merged_away[i]) continue;
        std::sort(group_of[i].begin(), group_of[i].end());
        groups.push_back(group_of[i]);
    }

    Partition part;
    part.count = static_cast<int>(groups.size());
    part.members = groups;
    part.labels.assign(n, -1);
    for (int k = 0; k < part.count; ++k)
        for (int i : groups[k]) part.labels[i] = k;
    return part;
}

TensorPtr merge_tome(Graph& g, const TensorPtr& z, int r) {
    return merge_mean(g, z, tome_groups(z, r));
}

TensorPtr partition_agreement(Graph& g, const TensorPtr& a, const Partition& part) {
    const int n = a->rows();
    if (a->cols() != n || static_cast<int>(part.labels.size()) != n) {
        throw std::invalid_argument("partition_agreement: shape mismatch");
    }
    bool needs = a->requires_grad || a->needs_grad;
    std::int64_t n_within = 0, n_cross = 0;
    double within = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (part.labels[i] == part.labels[j]) {
                within += a->at(i, j);
                ++n_within;
            } else {
                cross += a->at(i, j);
                ++n_cross;
            }
        }
    }
    TensorPtr out = make_tensor({1, 1});
    out->needs_grad = needs;
    if (needs) out->ensure_grad();
    out->data[0] = (n_within > 0 ? within / n_within : 0.0) -
                   (n_cross > 0 ? cross / n_cross : 0.0);
    if (needs) {
        auto labels = std::make_shared<std::vector<int>>(part.labels);
        g.record([a, out, labels, n, n_within, n_cross]() {
            a->ensure_grad();
            const double go = out->grad[0];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    if ((*labels)[i] == (*labels)[j]) {
                        if (n_within > 0) a->grad[i * n + j] += go / n_within;
                    } else {
                        if (n_cross > 0) a->grad[i * n + j] -= go / n_cross;
                    }
                }
        });
    }
    return out;
}

AscLayerResult asc_layer(Graph& g, const TensorPtr& tokens, const TensorPtr& affinity,
                         const TensorPtr& theta, const AscLayerOptions& opt,
                         OpCounter* counter) {
    AscLayerResult res;
    TensorPtr s = similarity(g, affinity, counter);
    TensorPtr a = gate(g, s, theta);
    if (opt.merge == MergeMode::Tome) {
        const int n = tokens->rows();
        const int r = std::min(opt.tome_r, n / 2);
        res.partition = tome_groups(tokens, r);
        res.tokens = merge_mean(g, tokens, res.partition);
        res.edge_count = binarize(a, opt.edge_cut, counter).edge_count();
        res.surrogate = scale(g, partition_agreement(g, a, res.partition), opt.surrogate_lambda);
        return res;
    }
    BoolAdjacency adj = binarize(a, opt.edge_cut, counter);
    res.edge_count = adj.edge_count();
    res.partition = components(adj, counter);
    res.surrogate = scale(g, partition_agreement(g, a, res.partition), opt.surrogate_lambda);
    res.tokens = opt.merge == MergeMode::Max ? merge_max(g, tokens, res.partition)
                                             : merge_mean(g, tokens, res.partition);
    return res;
}

} // namespace asc
