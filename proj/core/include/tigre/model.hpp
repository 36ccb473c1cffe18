#pragma once

#include <cstdint>
#include <optional>

#include "tigre/attention.hpp"
#include "tigre/decoders.hpp"
#include "tigre/time_encoding.hpp"
#include "tigre/update_module.hpp"

namespace tigre {

struct ModelConfig {
    std::size_t dim = 172;       // node embedding dimension d
    std::size_t time_dim = 172;  // time embedding dimension (2 * d_T)
    std::size_t heads = 2;
    std::size_t neighbors = 15;
    NeighborStrategy neighbor_strategy = NeighborStrategy::MostRecent;
    QueryTimeMode query_time = QueryTimeMode::ZeroDelta;
    OdeSolverKind ode_solver = OdeSolverKind::Rk4;
    std::size_t ode_steps = 4;
    double ode_horizon = 1.0;
    bool ode_real_interval = false;  // integrate each node to its own delta-t
    double beta = 0.95;
    double dropout = 0.1;
    DecoderKind decoder = DecoderKind::Mlp;
    bool shared_time_encoder = true;
    AblationFlags ablation;
    std::uint64_t seed = 42;
};

/// All learnable components wired to one parameter store. Stateless apart
/// from parameters: stream state (memory, neighbor index) lives in Engine.
class Model {
public:
    Model(std::size_t feature_dim, double max_timestamp, ModelConfig config);

    const ModelConfig& config() const { return config_; }
    std::size_t feature_dim() const { return feature_dim_; }

    ad::ParameterStore& params() { return params_; }
    const ad::ParameterStore& params() const { return params_; }

    const TimeEncoder& update_time_encoder() const { return time_encoder_; }
    const TimeEncoder& transform_time_encoder() const {
        return transform_time_encoder_ ? *transform_time_encoder_ : time_encoder_;
    }
    const MessageEncoder& encoder() const { return encoder_; }
    const GatedOdeDynamics& dynamics() const { return dynamics_; }
    const TemporalAttention& attention() const { return attention_; }
    const LinkDecoder& decoder() const { return decoder_; }

    OdeOptions ode_options() const {
        return {config_.ode_solver, config_.ode_steps, config_.ode_horizon};
    }

private:
    ModelConfig config_;
    std::size_t feature_dim_;
    std::mt19937_64 init_rng_;
    ad::ParameterStore params_;
    TimeEncoder time_encoder_;
    std::optional<TimeEncoder> transform_time_encoder_;
    MessageEncoder encoder_;
    GatedOdeDynamics dynamics_;
    TemporalAttention attention_;
    LinkDecoder decoder_;
};

} // namespace tigre
