#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tigre/ops.hpp"
#include "tigre/optim.hpp"

namespace tigre {

/// Component on/off switches mirroring the model's ablation variants.
struct AblationFlags {
    bool no_update = false;     // skip the ODE; memory takes the encoder output
    bool no_transform = false;  // attention layer passes the memory embedding through
    bool no_adaptive = false;   // gates pinned to 1 (plain sum of the three factors)
    bool no_latest = false;     // drop the initial-state factor
    bool no_neighbor = false;   // drop the adjacency factor
    bool no_inherent = false;   // drop the decay factor
};

enum class OdeSolverKind { Euler, Rk4 };

struct OdeOptions {
    OdeSolverKind solver = OdeSolverKind::Rk4;
    std::size_t steps = 4;
    double horizon = 1.0;
};

/// Fully connected encoder mapping the concatenated latest-interaction
/// message (own embedding, partner embedding, edge features, time encoding)
/// to a d-dimensional state.
class MessageEncoder {
public:
    MessageEncoder(ad::ParameterStore& params, const std::string& path, std::size_t input_width,
                   std::size_t dim, std::mt19937_64& rng);

    ad::Tensor encode_rows(const ad::Tensor& inputs) const;

    std::size_t input_width() const { return weight_.shape()[0]; }
    const ad::Tensor& weight() const { return weight_; }
    const ad::Tensor& bias() const { return bias_; }

private:
    ad::Tensor weight_;  // [input_width, dim]
    ad::Tensor bias_;    // [dim]
};

/// Regularized latest-interaction adjacency over an active node set:
/// A = (beta/2) (I + D^{-1/2} S D^{-1/2}) with S symmetric over (u, r_u)
/// pairs. Zero-degree rows reduce to (beta/2) on the diagonal, and every
/// eigenvalue of A lies in [0, beta].
struct LatestAdjacency {
    std::vector<std::int32_t> nodes;  // active node ids in row order
    ad::Tensor matrix;                // [n, n], constant (no grad)
    double beta = 0.95;
};

/// `partners[i]` is the latest partner of `active[i]`; 0 means none. Partners
/// outside the active set contribute no edge.
LatestAdjacency build_adjacency(const std::vector<std::int32_t>& active,
                                const std::vector<std::int32_t>& partners, double beta);

/// Gated three-factor dynamics
///   dH/dt = z_l . H0  +  z_n . (A H)  -  z_i . H
/// with sigmoid gates computed once from H0 and held constant over the solve,
/// which makes the system affine in H.
class GatedOdeDynamics {
public:
    GatedOdeDynamics(ad::ParameterStore& params, const std::string& path, std::size_t dim,
                     std::mt19937_64& rng);

    struct Gates {
        ad::Tensor latest, neighbor, inherent;
    };

    Gates gates(const ad::Tensor& h0, const AblationFlags& ablation = {}) const;

    ad::Tensor rhs(const Gates& gates, const ad::Tensor& adjacency, const ad::Tensor& h0,
                   const ad::Tensor& h, const AblationFlags& ablation = {}) const;

    /// Fixed-step integration over [0, horizon]; differentiable through the
    /// unrolled steps. A non-null `time_scale` ([n, d], constant) multiplies
    /// the rhs elementwise, reparametrizing each row to its own end time.
    ad::Tensor solve(const ad::Tensor& adjacency, const ad::Tensor& h0, const OdeOptions& options,
                     const AblationFlags& ablation = {},
                     const ad::Tensor* time_scale = nullptr) const;

private:
    ad::Tensor w_latest_, b_latest_;
    ad::Tensor w_neighbor_, b_neighbor_;
    ad::Tensor w_inherent_, b_inherent_;
};

} // namespace tigre
