#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asc/data.hpp"
#include "asc/ssl.hpp"

#include <cmath>

using namespace asc;

namespace {

SiameseModel small_model(std::uint64_t seed) {
    SiameseModel m;
    m.cfg.depth = 2;
    m.cfg.embed_dim = 16;
    m.cfg.heads = 2;
    m.cfg.patch_size = 4;
    m.cfg.image_size = 16;
    m.cfg.asc_positions = {0};
    m.init(seed);
    return m;
}

TensorPtr unit_row(std::initializer_list<double> v) {
    Graph g;
    return l2_normalize_rows(g, make_tensor({1, static_cast<int>(v.size())}, v));
}

} // namespace

TEST_CASE("pair loss identities") {
    Graph g;
    TensorPtr p = unit_row({0.3, -0.4, 0.5, 0.1});
    CHECK(pair_loss(g, p, p)->data[0] == doctest::Approx(0.0).epsilon(1e-12));
    TensorPtr neg = scale(g, p, -1.0);
    CHECK(pair_loss(g, p, neg)->data[0] == doctest::Approx(4.0));
    TensorPtr q = unit_row({1.0, 0.0, 0.0, 0.0});
    // 2 - 2<p,q> equals the squared distance for unit vectors
    double sq = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double d = p->data[static_cast<std::size_t>(i)] - q->data[static_cast<std::size_t>(i)];
        sq += d * d;
    }
    CHECK(pair_loss(g, p, q)->data[0] == doctest::Approx(sq).epsilon(1e-12));
}

TEST_CASE("pair loss rejects non-unit inputs") {
    Graph g;
    TensorPtr p = make_tensor({1, 3}, {1.0, 1.0, 0.0});
    TensorPtr z = unit_row({0.0, 1.0, 0.0});
    CHECK_THROWS(pair_loss(g, p, z));
}

TEST_CASE("target mirrors encoder and projector only, without gradients") {
    SiameseModel m = small_model(1);
    for (const auto& name : m.target.names()) {
        CHECK((name.rfind("enc.", 0) == 0 || name.rfind("proj.", 0) == 0));
        CHECK_FALSE(m.target.get(name)->requires_grad);
        // initialized to the online values
        TensorPtr o = m.online.get(name), t = m.target.get(name);
        REQUIRE(o->size() == t->size());
        for (std::size_t i = 0; i < o->size(); ++i) CHECK(o->data[i] == t->data[i]);
    }
    CHECK(m.online.count() > m.target.count()); // predictor is online-only
}

TEST_CASE("ema update applies the momentum blend") {
    SiameseModel m = small_model(2);
    TensorPtr online = m.online.get("enc.patch.bias");
    TensorPtr target = m.target.get("enc.patch.bias");
    online->data[0] = 1.0;
    target->data[0] = 0.0;
    ema_update(m, 0.996);
    CHECK(target->data[0] == doctest::Approx(0.004).epsilon(1e-12));
    CHECK_THROWS(ema_update(m, 1.0));
}

TEST_CASE("forward pass yields finite loss and no target gradients") {
    SiameseModel m = small_model(3);
    ClipSpec spec;
    spec.size = m.cfg.image_size;
    SyntheticClip clip = generate_clip(42, spec);
    Graph g;
    PairForward pf = siamese_pair_forward(g, m, clip.frames[0], clip.frames[7]);
    CHECK(std::isfinite(pf.loss->data[0]));
    CHECK(pf.pair_loss_value >= 0.0);
    CHECK(pf.pair_loss_value <= 4.0);
    CHECK(pf.token_ratios.size() == 1);
    g.backward(pf.loss);
    for (const auto& name : m.target.names()) {
        CHECK(m.target.get(name)->grad.empty()); // stop-gradient held
    }
    // online parameters received gradient somewhere
    double total = 0.0;
    for (const auto& name : m.online.names()) {
        for (double v : m.online.get(name)->grad) total += std::fabs(v);
    }
    CHECK(total > 0.0);
}

TEST_CASE("theta receives gradient only through the partition surrogate") {
    SiameseModel m = small_model(4);
    ClipSpec spec;
    spec.size = m.cfg.image_size;
    SyntheticClip clip = generate_clip(43, spec);
    Graph g;
    PairForward pf = siamese_pair_forward(g, m, clip.frames[0], clip.frames[7]);
    g.backward(pf.loss);
    TensorPtr theta = m.online.get("enc.theta0");
    REQUIRE_FALSE(theta->grad.empty());
    CHECK(std::isfinite(theta->grad[0]));
}

TEST_CASE("projector and predictor have the documented shapes") {
    SiameseModel m = small_model(5);
    const int d = m.cfg.embed_dim;
    CHECK(m.online.get("proj.w1")->shape == std::vector<int>{d, 2 * d});
    CHECK(m.online.get("proj.w3")->shape == std::vector<int>{2 * d, d});
    CHECK(m.online.get("pred.w1")->shape == std::vector<int>{d, 2 * d});
    CHECK(m.online.get("pred.w2")->shape == std::vector<int>{2 * d, d});

    Graph g;
    TensorPtr x = make_tensor({1, d}, std::vector<double>(static_cast<std::size_t>(d), 0.1));
    TensorPtr out = project_and_normalize(g, m.online, "proj.", x);
    double n = 0.0;
    for (double v : out->data) n += v * v;
    CHECK(std::sqrt(n) == doctest::Approx(1.0));
}
