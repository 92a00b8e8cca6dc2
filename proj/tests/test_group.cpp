#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asc/grouping.hpp"
#include "asc/rng.hpp"

#include <algorithm>
#include <numeric>

using namespace asc;

namespace {

BoolAdjacency random_graph(int n, double p, Rng& rng) {
    BoolAdjacency adj;
    adj.n = n;
    adj.edges.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform(rng, 0.0, 1.0) < p) adj.set_edge(i, j, true);
    return adj;
}

// Reachability closure by repeated squaring of the boolean relation
// (Floyd-Warshall style), then labels assigned by lowest-index member.
Partition closure_oracle(const BoolAdjacency& adj) {
    const int n = adj.n;
    std::vector<char> reach(adj.edges);
    for (int i = 0; i < n; ++i) reach[static_cast<std::size_t>(i) * n + i] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[static_cast<std::size_t>(i) * n + k])
                for (int j = 0; j < n; ++j)
                    if (reach[static_cast<std::size_t>(k) * n + j])
                        reach[static_cast<std::size_t>(i) * n + j] = 1;

    Partition part;
    part.labels.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (part.labels[static_cast<std::size_t>(i)] >= 0) continue;
        const int label = part.count++;
        part.members.emplace_back();
        for (int j = i; j < n; ++j) {
            if (reach[static_cast<std::size_t>(i) * n + j]) {
                part.labels[static_cast<std::size_t>(j)] = label;
                part.members.back().push_back(j);
            }
        }
    }
    return part;
}

TensorPtr random_tokens(int n, int d, Rng& rng, double stddev = 1.0) {
    TensorPtr z = make_tensor({n, d});
    for (auto& v : z->data) v = normal(rng, 0.0, stddev);
    return z;
}

} // namespace

TEST_CASE("components equal the reachability closure oracle") {
    Rng rng(101);
    for (double p : {0.02, 0.1, 0.3}) {
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 63);
            BoolAdjacency adj = random_graph(n, p, rng);
            Partition got = components(adj);
            Partition want = closure_oracle(adj);
            REQUIRE(got.count == want.count);
            CHECK(got.labels == want.labels);
            CHECK(got.members == want.members);
        }
    }
}

TEST_CASE("same-component membership is an equivalence relation") {
    Rng rng(102);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 40);
        BoolAdjacency adj = random_graph(n, 0.1, rng);
        Partition part = components(adj);
        for (int i = 0; i < n; ++i) {
            CHECK(part.labels[i] == part.labels[i]); // reflexive by construction
            for (int j = 0; j < n; ++j) {
                CHECK((part.labels[i] == part.labels[j]) == (part.labels[j] == part.labels[i]));
                if (adj.edge(i, j)) CHECK(part.labels[i] == part.labels[j]);
            }
        }
        // transitivity: labels are a function of the node, so equal labels chain
        std::vector<int> sizes(static_cast<std::size_t>(part.count), 0);
        for (int l : part.labels) ++sizes[static_cast<std::size_t>(l)];
        for (std::size_t c = 0; c < part.members.size(); ++c) {
            CHECK(static_cast<int>(part.members[c].size()) == sizes[c]);
        }
    }
}

TEST_CASE("edge chain 0-1-2 forms one component") {
    BoolAdjacency adj;
    adj.n = 3;
    adj.edges.assign(9, 0);
    adj.set_edge(0, 1, true);
    adj.set_edge(1, 2, true);
    Partition part = components(adj);
    CHECK(part.count == 1);
    CHECK(part.labels == std::vector<int>{0, 0, 0});
}

TEST_CASE("asymmetric adjacency is rejected") {
    BoolAdjacency adj;
    adj.n = 2;
    adj.edges = {0, 1, 0, 0};
    CHECK_THROWS(components(adj));
}

TEST_CASE("labels are ordered by lowest-index member") {
    BoolAdjacency adj;
    adj.n = 5;
    adj.edges.assign(25, 0);
    adj.set_edge(1, 4, true);
    adj.set_edge(2, 3, true);
    Partition part = components(adj);
    CHECK(part.labels == std::vector<int>{0, 1, 2, 2, 1});
}

TEST_CASE("similarity is symmetric and matches the dot products") {
    Graph g;
    Rng rng(103);
    TensorPtr z = random_tokens(6, 4, rng);
    TensorPtr s = similarity(g, z);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 4; ++k) dot += z->at(i, k) * z->at(j, k);
            CHECK(s->at(i, j) == doctest::Approx(dot));
            CHECK(s->at(i, j) == doctest::Approx(s->at(j, i)));
        }
    }
}

TEST_CASE("binarize thresholds the gate at the edge cut") {
    Graph g;
    TensorPtr s = make_tensor({2, 2}, {5.0, 0.3, 0.3, 5.0});
    TensorPtr theta = scalar_tensor(0.2);
    TensorPtr a = gate(g, s, theta);
    // off-diagonal: sigmoid(0.1) > 0.5, so the pair is joined
    BoolAdjacency adj = binarize(a, 0.5);
    CHECK(adj.edge(0, 1));
    TensorPtr theta2 = scalar_tensor(0.4);
    BoolAdjacency adj2 = binarize(gate(g, s, theta2), 0.5);
    CHECK_FALSE(adj2.edge(0, 1)); // sigmoid(-0.1) < 0.5
}

TEST_CASE("saturation: extreme thresholds give identity and total merge") {
    Graph g;
    Rng rng(104);
    TensorPtr z = random_tokens(12, 8, rng);
    TensorPtr s = similarity(g, z);
    double max_off = -1e300, min_s = 1e300;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            if (i != j) max_off = std::max(max_off, s->at(i, j));
            min_s = std::min(min_s, s->at(i, j));
        }
    Partition all_apart = components(binarize(gate(g, s, scalar_tensor(max_off + 1.0)), 0.5));
    CHECK(all_apart.count == 12);
    Partition all_joined = components(binarize(gate(g, s, scalar_tensor(min_s - 1.0)), 0.5));
    CHECK(all_joined.count == 1);
}

TEST_CASE("component count is monotone non-decreasing in theta") {
    Graph g;
    Rng rng(105);
    TensorPtr z = random_tokens(20, 6, rng, 0.5);
    TensorPtr s = similarity(g, z);
    int prev = 0;
    for (int k = 0; k < 20; ++k) {
        const double theta = -4.0 + 0.4 * k;
        Partition part = components(binarize(gate(g, s, scalar_tensor(theta)), 0.5));
        CHECK(part.count >= prev);
        prev = part.count;
    }
}

TEST_CASE("grouping is equivariant under token permutation") {
    Graph g;
    Rng rng(106);
    const int n = 10;
    TensorPtr z = random_tokens(n, 5, rng, 0.6);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    TensorPtr zp = gather_rows(g, z, perm);

    auto classes = [&](const TensorPtr& t) {
        return components(binarize(gate(g, similarity(g, t), scalar_tensor(0.2)), 0.5));
    };
    Partition a = classes(z);
    Partition b = classes(zp);
    CHECK(a.count == b.count);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const bool same_orig = a.labels[perm[i]] == a.labels[perm[j]];
            const bool same_perm = b.labels[i] == b.labels[j];
            CHECK(same_orig == same_perm);
        }
}

TEST_CASE("merge_mean averages members and splits gradient evenly") {
    Graph g;
    TensorPtr z = make_tensor({3, 2}, {1, 2, 3, 4, 11, 12}, true);
    Partition part;
    part.labels = {0, 0, 1};
    part.count = 2;
    part.members = {{0, 1}, {2}};
    TensorPtr m = merge_mean(g, z, part);
    REQUIRE(m->rows() == 2);
    CHECK(m->at(0, 0) == doctest::Approx(2.0));
    CHECK(m->at(0, 1) == doctest::Approx(3.0));
    CHECK(m->at(1, 0) == doctest::Approx(11.0));
    g.backward(sum_all(g, m));
    CHECK(z->grad[0] == doctest::Approx(0.5));
    CHECK(z->grad[2] == doctest::Approx(0.5));
    CHECK(z->grad[4] == doctest::Approx(1.0));
}

TEST_CASE("merge_max takes the elementwise maximum per component") {
    Graph g;
    TensorPtr z = make_tensor({3, 2}, {1, 9, 5, 2, 7, 7}, true);
    Partition part;
    part.labels = {0, 0, 1};
    part.count = 2;
    part.members = {{0, 1}, {2}};
    TensorPtr m = merge_max(g, z, part);
    CHECK(m->at(0, 0) == doctest::Approx(5.0));
    CHECK(m->at(0, 1) == doctest::Approx(9.0));
    g.backward(sum_all(g, m));
    // gradient only reaches the argmax member per column
    CHECK(z->grad[0] == doctest::Approx(0.0));
    CHECK(z->grad[1] == doctest::Approx(1.0));
    CHECK(z->grad[2] == doctest::Approx(1.0));
    CHECK(z->grad[3] == doctest::Approx(0.0));
}

TEST_CASE("bipartite pair merging moves r sources into destinations") {
    Graph g;
    // tokens 0,2 (set A) and 1,3 (set B); 0 matches 1, 2 matches 3
    TensorPtr z = make_tensor({4, 2}, {1, 0, 1, 0.1, 0, 1, 0.1, 1});
    Partition part = tome_groups(z, 1);
    CHECK(part.count == 3); // one pair merged
    TensorPtr m = merge_tome(g, z, 1);
    CHECK(m->rows() == 3);

    Partition both = tome_groups(z, 2);
    CHECK(both.count == 2);
}

TEST_CASE("tome r=0 leaves the sequence unchanged") {
    Graph g;
    Rng rng(107);
    TensorPtr z = random_tokens(6, 3, rng);
    TensorPtr m = merge_tome(g, z, 0);
    REQUIRE(m->rows() == 6);
    for (std::size_t i = 0; i < z->size(); ++i) CHECK(m->data[i] == doctest::Approx(z->data[i]));
}

TEST_CASE("partition agreement is within-minus-cross mean affinity") {
    Graph g;
    TensorPtr a = make_tensor({3, 3}, {1.0, 0.8, 0.1, 0.8, 1.0, 0.2, 0.1, 0.2, 1.0});
    Partition part;
    part.labels = {0, 0, 1};
    part.count = 2;
    part.members = {{0, 1}, {2}};
    TensorPtr v = partition_agreement(g, a, part);
    // within pairs: (0,1),(1,0) -> mean 0.8; cross: (0,2),(1,2),(2,0),(2,1) -> mean 0.15
    CHECK(v->data[0] == doctest::Approx(0.8 - 0.15));
}

TEST_CASE("asc layer shrinks tokens and reports the surrogate") {
    Graph g;
    // two tight clusters on different axes
    TensorPtr z = make_tensor({4, 2}, {1, 0, 0.9, 0, 0, 1, 0, 0.9}, true);
    AscLayerOptions opt;
    AscLayerResult out = asc_layer(g, z, z, scalar_tensor(0.5, true), opt);
    CHECK(out.partition.count == 2);
    CHECK(out.tokens->rows() == 2);
    CHECK(out.surrogate->size() == 1);
    CHECK(out.edge_count == 2);
}

TEST_CASE("op counters grow quadratically in the token count") {
    Rng rng(108);
    std::vector<std::int64_t> totals;
    for (int n : {16, 32, 64}) {
        Graph g;
        TensorPtr z = random_tokens(n, 8, rng, 0.1);
        OpCounter counter;
        TensorPtr s = similarity(g, z, &counter);
        BoolAdjacency adj = binarize(gate(g, s, scalar_tensor(0.2)), 0.5, &counter);
        components(adj, &counter);
        totals.push_back(counter.total());
    }
    // quadrupling when n doubles, within slack for the linear DFS part
    CHECK(totals[1] > 3 * totals[0]);
    CHECK(totals[1] < 5 * totals[0]);
    CHECK(totals[2] > 3 * totals[1]);
    CHECK(totals[2] < 5 * totals[1]);
}
