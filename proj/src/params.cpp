#include "asc/params.hpp"

#include <stdexcept>

namespace asc {

TensorPtr ParamStore::add(const std::string& name, TensorPtr t) {
    if (map_.count(name)) throw std::invalid_argument("duplicate parameter " + name);
    names_.push_back(name);
    map_[name] = t;
    return t;
}

TensorPtr ParamStore::get(const std::string& name) const {
    auto it = map_.find(name);
    if (it == map_.end()) throw std::invalid_argument("unknown parameter " + name);
    return it->second;
}

std::size_t ParamStore::total_values() const {
    std::size_t n = 0;
    for (const auto& name : names_) n += map_.at(name)->size();
    return n;
}

void ParamStore::zero_grads() {
    for (const auto& name : names_) map_.at(name)->zero_grad();
}

ParamStore ParamStore::clone(bool requires_grad) const {
    ParamStore out;
    for (const auto& name : names_) {
        const TensorPtr& src = map_.at(name);
        out.add(name, make_tensor(src->shape, src->data, requires_grad));
    }
    return out;
}

void ParamStore::copy_values_from(const ParamStore& other) {
    if (names_ != other.names_) {
        throw std::invalid_argument("parameter stores are structurally different");
    }
    for (const auto& name : names_) {
        TensorPtr dst = map_.at(name);
        TensorPtr src = other.map_.at(name);
        if (dst->shape != src->shape) {
            throw std::invalid_argument("shape mismatch for parameter " + name);
        }
        dst->data = src->data;
    }
}

} // namespace asc
