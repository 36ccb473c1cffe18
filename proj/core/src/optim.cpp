#include "tigre/optim.hpp"

#include <cmath>
#include <cstring>

#include "tigre/errors.hpp"

namespace tigre::ad {

Tensor ParameterStore::create(const std::string& path, Shape shape, std::size_t fan_in,
                              std::mt19937_64& rng) {
    for (const auto& [name, _] : items_)
        if (name == path) throw EngineError("parameter path already registered: " + path);
    const double bound = fan_in > 0 ? 1.0 / std::sqrt(static_cast<double>(fan_in)) : 1.0;
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    std::vector<double> data(n);
    for (auto& v : data) v = dist(rng);
    Tensor t = Tensor::from(std::move(shape), std::move(data), /*requires_grad=*/true);
    items_.emplace_back(path, t);
    return t;
}

Tensor ParameterStore::adopt(const std::string& path, Tensor t) {
    for (const auto& [name, _] : items_)
        if (name == path) throw EngineError("parameter path already registered: " + path);
    if (!t.requires_grad()) throw EngineError("adopted parameter must require grad: " + path);
    items_.emplace_back(path, t);
    return t;
}

std::vector<Tensor> ParameterStore::tensors() const {
    std::vector<Tensor> out;
    out.reserve(items_.size());
    for (const auto& [_, t] : items_) out.push_back(t);
    return out;
}

Tensor ParameterStore::find(const std::string& path) const {
    for (const auto& [name, t] : items_)
        if (name == path) return t;
    throw EngineError("parameter not found: " + path);
}

std::size_t ParameterStore::total_size() const {
    std::size_t n = 0;
    for (const auto& [_, t] : items_) n += t.size();
    return n;
}

std::uint64_t ParameterStore::value_fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& [name, t] : items_) {
        mix(name.data(), name.size());
        auto vals = t.values();
        mix(vals.data(), vals.size() * sizeof(double));
    }
    return h;
}

void ParameterStore::zero_grad() {
    for (auto& [_, t] : items_) t.zero_grad();
}

Adam::Adam(std::vector<Tensor> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const auto& p : params_) {
        if (!p.requires_grad()) throw EngineError("Adam: parameter without gradient buffer");
        m_.emplace_back(p.size(), 0.0);
        v_.emplace_back(p.size(), 0.0);
    }
}

void Adam::step() {
    ++step_;
    const double b1 = config_.beta1, b2 = config_.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto vals = params_[i].values_mut();
        auto grads = params_[i].grad();
        auto& m = m_[i];
        auto& v = v_[i];
        for (std::size_t j = 0; j < vals.size(); ++j) {
            const double g = grads[j];
            m[j] = b1 * m[j] + (1.0 - b1) * g;
            v[j] = b2 * v[j] + (1.0 - b2) * g * g;
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            vals[j] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
        }
    }
}

void Adam::zero_grad() {
    for (auto& p : params_) p.zero_grad();
}

} // namespace tigre::ad
