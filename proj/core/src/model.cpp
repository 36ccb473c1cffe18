#include "tigre/model.hpp"

#include "tigre/errors.hpp"

namespace tigre {

Model::Model(std::size_t feature_dim, double max_timestamp, ModelConfig config)
    : config_(config),
      feature_dim_(feature_dim),
      init_rng_(config.seed),
      time_encoder_(params_, "time_encoder", config.time_dim, max_timestamp),
      transform_time_encoder_(config.shared_time_encoder
                                  ? std::optional<TimeEncoder>{}
                                  : std::optional<TimeEncoder>(std::in_place, params_,
                                                               "transform_time_encoder",
                                                               config.time_dim, max_timestamp)),
      encoder_(params_, "message_encoder", 2 * config.dim + feature_dim + config.time_dim,
               config.dim, init_rng_),
      dynamics_(params_, "dynamics", config.dim, init_rng_),
      attention_(params_, "attention", config.dim, feature_dim, config.time_dim, config.heads,
                 config.neighbors, init_rng_),
      decoder_(params_, "link_decoder", config.dim, config.decoder, init_rng_) {
    if (config_.dim == 0) throw ConfigError("model: dim must be positive");
    if (config_.beta <= 0.0 || config_.beta >= 1.0)
        throw ConfigError("model: beta must be in (0, 1)");
}

} // namespace tigre
