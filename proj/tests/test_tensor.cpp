#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asc/grad_check.hpp"
#include "asc/rng.hpp"
#include "asc/tensor.hpp"

#include <cmath>

using namespace asc;

TEST_CASE("matmul values and shapes") {
    Graph g;
    TensorPtr a = make_tensor({2, 3}, {1, 2, 3, 4, 5, 6});
    TensorPtr b = make_tensor({3, 2}, {7, 8, 9, 10, 11, 12});
    TensorPtr c = matmul(g, a, b);
    CHECK(c->shape == std::vector<int>{2, 2});
    CHECK(c->at(0, 0) == doctest::Approx(58));
    CHECK(c->at(0, 1) == doctest::Approx(64));
    CHECK(c->at(1, 0) == doctest::Approx(139));
    CHECK(c->at(1, 1) == doctest::Approx(154));
    CHECK_THROWS(matmul(g, a, a));
}

TEST_CASE("transpose round trip") {
    Graph g;
    TensorPtr a = make_tensor({2, 3}, {1, 2, 3, 4, 5, 6});
    TensorPtr t = transpose(g, transpose(g, a));
    for (std::size_t i = 0; i < a->size(); ++i) CHECK(t->data[i] == a->data[i]);
}

TEST_CASE("elementwise ops validate shapes") {
    Graph g;
    TensorPtr a = make_tensor({2, 2}, {1, 2, 3, 4});
    TensorPtr b = make_tensor({2, 3});
    CHECK_THROWS(add(g, a, b));
    CHECK_THROWS(mul(g, a, b));
    TensorPtr s = sub(g, a, a);
    for (double v : s->data) CHECK(v == 0.0);
}

TEST_CASE("softmax rows sum to one and are positive") {
    Graph g;
    TensorPtr a = make_tensor({2, 4}, {1, 2, 3, 4, -1, 0, 1, 2});
    TensorPtr p = softmax_rows(g, a);
    for (int r = 0; r < 2; ++r) {
        double s = 0.0;
        for (int c = 0; c < 4; ++c) {
            CHECK(p->at(r, c) > 0.0);
            s += p->at(r, c);
        }
        CHECK(s == doctest::Approx(1.0));
    }
}

TEST_CASE("masked softmax zeroes masked keys") {
    Graph g;
    TensorPtr a = make_tensor({2, 4}, {5, 1, 2, 9, 0, 0, 0, 0});
    TensorPtr p = masked_softmax_rows(g, a, {1, 0, 1, 0});
    for (int r = 0; r < 2; ++r) {
        CHECK(p->at(r, 1) == 0.0);
        CHECK(p->at(r, 3) == 0.0);
        CHECK(p->at(r, 0) + p->at(r, 2) == doctest::Approx(1.0));
    }
}

TEST_CASE("layer norm normalizes each row") {
    Graph g;
    Rng rng(7);
    TensorPtr x = make_tensor({3, 16});
    for (auto& v : x->data) v = normal(rng, 2.0, 3.0);
    TensorPtr gain = make_tensor({1, 16}, std::vector<double>(16, 1.0));
    TensorPtr bias = make_tensor({1, 16}, std::vector<double>(16, 0.0));
    TensorPtr y = layer_norm(g, x, gain, bias);
    for (int r = 0; r < 3; ++r) {
        double mean = 0.0, var = 0.0;
        for (int c = 0; c < 16; ++c) mean += y->at(r, c);
        mean /= 16;
        for (int c = 0; c < 16; ++c) var += (y->at(r, c) - mean) * (y->at(r, c) - mean);
        var /= 16;
        CHECK(mean == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(var == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("l2 normalize produces unit rows") {
    Graph g;
    TensorPtr x = make_tensor({2, 3}, {3, 4, 0, 1, 1, 1});
    TensorPtr y = l2_normalize_rows(g, x);
    for (int r = 0; r < 2; ++r) {
        double n = 0.0;
        for (int c = 0; c < 3; ++c) n += y->at(r, c) * y->at(r, c);
        CHECK(std::sqrt(n) == doctest::Approx(1.0));
    }
}

TEST_CASE("backward matches finite differences on a composite expression") {
    Rng rng(11);
    TensorPtr x = make_tensor({3, 4}, true);
    for (auto& v : x->data) v = normal(rng, 0.0, 1.0);
    TensorPtr w = make_tensor({4, 2}, true);
    for (auto& v : w->data) v = normal(rng, 0.0, 1.0);

    auto forward = [&](Graph& g) {
        TensorPtr h = gelu(g, matmul(g, x, w));
        return sum_all(g, mul(g, h, sigmoid(g, h)));
    };
    auto scalar_f = [&]() {
        Graph g;
        return forward(g)->data[0];
    };
    Graph g;
    g.backward(forward(g));
    CHECK(max_rel_error(x->grad, finite_diff(scalar_f, x, 1e-5)->data) < 1e-6);
    CHECK(max_rel_error(w->grad, finite_diff(scalar_f, w, 1e-5)->data) < 1e-6);
}

TEST_CASE("gather rows accumulates gradient for duplicate indices") {
    Graph g;
    TensorPtr x = make_tensor({3, 2}, {1, 2, 3, 4, 5, 6}, true);
    TensorPtr y = gather_rows(g, x, {0, 0, 2});
    g.backward(sum_all(g, y));
    CHECK(x->grad[0] == doctest::Approx(2.0)); // row 0 picked twice
    CHECK(x->grad[2] == doctest::Approx(0.0)); // row 1 never picked
    CHECK(x->grad[4] == doctest::Approx(1.0));
}

TEST_CASE("stop gradient blocks the tape") {
    Graph g;
    TensorPtr x = make_tensor({1, 3}, {1, 2, 3}, true);
    TensorPtr y = stop_gradient(x);
    CHECK_FALSE(y->requires_grad);
    CHECK_FALSE(y->needs_grad);
    TensorPtr loss = sum_all(g, mul(g, x, y));
    g.backward(loss);
    // d/dx of x*const = const, no second-order path through y
    CHECK(x->grad[0] == doctest::Approx(1.0));
    CHECK(x->grad[1] == doctest::Approx(2.0));
    CHECK(x->grad[2] == doctest::Approx(3.0));
}

TEST_CASE("backward requires a scalar loss") {
    Graph g;
    TensorPtr x = make_tensor({2, 2}, {1, 2, 3, 4}, true);
    TensorPtr y = scale(g, x, 2.0);
    CHECK_THROWS(g.backward(y));
}

TEST_CASE("non-finite results are rejected") {
    Graph g;
    TensorPtr a = make_tensor({1, 1}, std::vector<double>{1e308});
    CHECK_THROWS(mul(g, a, a));
}

TEST_CASE("slice and concat are inverse") {
    Graph g;
    TensorPtr x = make_tensor({2, 4}, {1, 2, 3, 4, 5, 6, 7, 8});
    TensorPtr left = slice_cols(g, x, 0, 2);
    TensorPtr right = slice_cols(g, x, 2, 2);
    TensorPtr back = concat_cols(g, {left, right});
    for (std::size_t i = 0; i < x->size(); ++i) CHECK(back->data[i] == x->data[i]);
}
