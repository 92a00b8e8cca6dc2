#pragma once

// Central-difference gradient oracle. Kept in the library because the
// gradcheck CLI command runs the same suite the tests use.

#include "asc/tensor.hpp"

#include <functional>

namespace asc {

// f evaluates a scalar from the current contents of x->data. finite_diff
// perturbs each coordinate by +/-h and returns (f(x+h)-f(x-h))/(2h).
TensorPtr finite_diff(const std::function<double()>& f, const TensorPtr& x, double h);

// max_i |a_i - b_i| / max(scale, max_j |b_j|), with b the reference.
double max_rel_error(const std::vector<double>& a, const std::vector<double>& b,
                     double scale = 1e-8);

} // namespace asc
