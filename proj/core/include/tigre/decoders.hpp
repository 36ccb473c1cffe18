#pragma once

#include <random>
#include <string>

#include "tigre/attention.hpp"
#include "tigre/ops.hpp"
#include "tigre/optim.hpp"

namespace tigre {

enum class DecoderKind { Dot, Mlp };

/// Scores a candidate edge from the two future embeddings. `Dot` is the plain
/// inner product; `Mlp` is two fully connected layers on the concatenation.
class LinkDecoder {
public:
    LinkDecoder(ad::ParameterStore& params, const std::string& path, std::size_t dim,
                DecoderKind kind, std::mt19937_64& rng);

    DecoderKind kind() const { return kind_; }

    ad::Tensor score(const ad::Tensor& h_src, const ad::Tensor& h_dst) const;

private:
    DecoderKind kind_;
    ad::Tensor w1_, b1_, w2_, b2_;  // Mlp only
};

/// Three fully connected layers for dynamic node classification
/// (dim -> 80 -> 10 -> 1 with relu and dropout on the hidden layers).
class NodeClassifier {
public:
    NodeClassifier(ad::ParameterStore& params, const std::string& path, std::size_t dim,
                   std::mt19937_64& rng, std::size_t hidden1 = 80, std::size_t hidden2 = 10);

    /// Row-wise logits: [n, dim] -> [n, 1].
    ad::Tensor logits(const ad::Tensor& h, const DropoutContext& dropout = {}) const;

private:
    ad::Tensor w1_, b1_, w2_, b2_, w3_, b3_;
};

} // namespace tigre
