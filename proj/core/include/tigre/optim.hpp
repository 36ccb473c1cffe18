#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tigre/tensor.hpp"

namespace tigre::ad {

/// Ordered registry of named learnable tensors. Names are slash-separated
/// paths ("encoder/w") used by the serialization container.
class ParameterStore {
public:
    /// Creates a parameter initialized uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
    Tensor create(const std::string& path, Shape shape, std::size_t fan_in, std::mt19937_64& rng);

    /// Registers an externally initialized parameter (must require grad).
    Tensor adopt(const std::string& path, Tensor t);

    const std::vector<std::pair<std::string, Tensor>>& items() const { return items_; }
    std::vector<Tensor> tensors() const;
    Tensor find(const std::string& path) const;
    std::size_t total_size() const;

    /// FNV-1a over the raw value bytes of every parameter, in registry order.
    std::uint64_t value_fingerprint() const;

    void zero_grad();

private:
    std::vector<std::pair<std::string, Tensor>> items_;
};

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected Adam over a fixed parameter list; gradients are read from
/// each parameter's grad buffer.
class Adam {
public:
    Adam(std::vector<Tensor> params, AdamConfig config);

    void step();
    void zero_grad();

    std::int64_t step_count() const { return step_; }
    const AdamConfig& config() const { return config_; }
    std::size_t param_count() const { return params_.size(); }

    // Moment buffers, exposed for checkpointing.
    std::vector<double>& first_moment(std::size_t i) { return m_[i]; }
    std::vector<double>& second_moment(std::size_t i) { return v_[i]; }
    void set_step_count(std::int64_t step) { step_ = step; }

private:
    std::vector<Tensor> params_;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
    std::int64_t step_ = 0;
    AdamConfig config_;
};

} // namespace tigre::ad
