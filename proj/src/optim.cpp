#include "asc/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace asc {

void OptimState::init(const ParamStore& params) {
    m.clear();
    v.clear();
    step = 0;
    for (const auto& name : params.names()) {
        const std::size_t n = params.get(name)->size();
        m[name].assign(n, 0.0);
        v[name].assign(n, 0.0);
    }
}

double cosine_lr(std::int64_t step, double lr0, std::int64_t warmup, std::int64_t total) {
    if (step < 0 || step > total) throw std::invalid_argument("cosine_lr: step out of range");
    if (warmup >= total) throw std::invalid_argument("cosine_lr: warmup must be below total");
    if (step < warmup) {
        return lr0 * static_cast<double>(step) / static_cast<double>(warmup);
    }
    const double progress =
        static_cast<double>(step - warmup) / static_cast<double>(total - warmup);
    return lr0 * 0.5 * (1.0 + std::cos(3.14159265358979323846 * progress));
}

void adam_step(ParamStore& params, OptimState& state, double rate, const AdamConfig& cfg) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (const auto& name : params.names()) {
        TensorPtr p = params.get(name);
        if (!p->requires_grad) continue;
        p->ensure_grad();
        auto& mm = state.m.at(name);
        auto& vv = state.v.at(name);
        for (std::size_t i = 0; i < p->size(); ++i) {
            const double grad = p->grad[i];
            if (std::isnan(grad)) {
                throw std::runtime_error("NaN gradient in parameter " + name);
            }
            mm[i] = cfg.beta1 * mm[i] + (1.0 - cfg.beta1) * grad;
            vv[i] = cfg.beta2 * vv[i] + (1.0 - cfg.beta2) * grad * grad;
            const double mhat = mm[i] / bc1;
            const double vhat = vv[i] / bc2;
            p->data[i] -= rate * mhat / (std::sqrt(vhat) + cfg.eps);
            p->data[i] -= rate * cfg.weight_decay * p->data[i]; // decoupled decay
        }
    }
}

} // namespace asc
