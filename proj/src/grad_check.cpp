#include "asc/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace asc {

TensorPtr finite_diff(const std::function<double()>& f, const TensorPtr& x, double h) {
    if (h <= 0.0) throw std::invalid_argument("finite_diff: h must be positive");
    TensorPtr out = make_tensor(x->shape);
    for (std::size_t i = 0; i < x->size(); ++i) {
        const double saved = x->data[i];
        x->data[i] = saved + h;
        const double fp = f();
        x->data[i] = saved - h;
        const double fm = f();
        x->data[i] = saved;
        out->data[i] = (fp - fm) / (2.0 * h);
    }
    return out;
}

double max_rel_error(const std::vector<double>& a, const std::vector<double>& b,
                     double scale) {
    if (a.size() != b.size()) throw std::invalid_argument("max_rel_error: length mismatch");
    double ref = scale;
    for (double v : b) ref = std::max(ref, std::fabs(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::fabs(a[i] - b[i]) / ref);
    }
    return worst;
}

} // namespace asc
