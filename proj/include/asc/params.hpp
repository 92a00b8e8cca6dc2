#pragma once

#include "asc/tensor.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace asc {

// Named parameter tensors in stable insertion order. Iteration order defines
// checkpoint layout and optimizer update order, so it must be deterministic.
class ParamStore {
public:
    TensorPtr add(const std::string& name, TensorPtr t);
    TensorPtr get(const std::string& name) const;
    bool has(const std::string& name) const { return map_.count(name) != 0; }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t count() const { return names_.size(); }
    std::size_t total_values() const;

    void zero_grads();
    // Structural copy; requires_grad of the copy is as given.
    ParamStore clone(bool requires_grad) const;
    // Value copy between structurally identical stores.
    void copy_values_from(const ParamStore& other);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, TensorPtr> map_;
};

} // namespace asc
