#pragma once

#include <random>
#include <string>
#include <vector>

#include "tigre/optim.hpp"
#include "tigre/tensor.hpp"

namespace tigre {

/// Learnable continuous mapping from a time value to a 2*half_dim vector of
/// interleaved cosine/sine pairs, scaled by 1/sqrt(half_dim) so the output
/// always has unit Euclidean norm.
class TimeEncoder {
public:
    /// time_dim must be even; half_dim = time_dim / 2 frequencies are created.
    /// Frequencies start on a geometric ladder from 1 down to 1/max_timestamp.
    TimeEncoder(ad::ParameterStore& params, const std::string& path, std::size_t time_dim,
                double max_timestamp);

    std::size_t out_dim() const { return 2 * half_dim_; }
    std::size_t half_dim() const { return half_dim_; }
    const ad::Tensor& frequencies() const { return omega_; }

    /// Encodes a batch of time values into an [n, out_dim] tensor,
    /// differentiable with respect to the frequencies.
    ad::Tensor encode(const std::vector<double>& times) const;

    ad::Tensor encode_one(double t) const { return encode({t}); }

private:
    ad::Tensor omega_;  // [half_dim]
    std::size_t half_dim_;
};

} // namespace tigre
