#include "tigre/decoders.hpp"

#include "tigre/errors.hpp"

namespace tigre {

using ad::Tensor;

LinkDecoder::LinkDecoder(ad::ParameterStore& params, const std::string& path, std::size_t dim,
                         DecoderKind kind, std::mt19937_64& rng)
    : kind_(kind) {
    if (kind_ == DecoderKind::Mlp) {
        w1_ = params.create(path + "/w1", {2 * dim, dim}, 2 * dim, rng);
        b1_ = params.create(path + "/b1", {dim}, 2 * dim, rng);
        w2_ = params.create(path + "/w2", {dim, 1}, dim, rng);
        b2_ = params.create(path + "/b2", {1}, dim, rng);
    }
}

Tensor LinkDecoder::score(const Tensor& h_src, const Tensor& h_dst) const {
    if (h_src.size() != h_dst.size()) throw EngineError("link decoder: embedding size mismatch");
    if (kind_ == DecoderKind::Dot) return ad::sum(ad::mul(h_src, h_dst));
    Tensor hidden = ad::relu(ad::linear(ad::concat_cols({h_src, h_dst}), w1_, b1_));
    return ad::sum(ad::linear(hidden, w2_, b2_));
}

NodeClassifier::NodeClassifier(ad::ParameterStore& params, const std::string& path,
                               std::size_t dim, std::mt19937_64& rng, std::size_t hidden1,
                               std::size_t hidden2) {
    w1_ = params.create(path + "/w1", {dim, hidden1}, dim, rng);
    b1_ = params.create(path + "/b1", {hidden1}, dim, rng);
    w2_ = params.create(path + "/w2", {hidden1, hidden2}, hidden1, rng);
    b2_ = params.create(path + "/b2", {hidden2}, hidden1, rng);
    w3_ = params.create(path + "/w3", {hidden2, 1}, hidden2, rng);
    b3_ = params.create(path + "/b3", {1}, hidden2, rng);
}

Tensor NodeClassifier::logits(const Tensor& h, const DropoutContext& dropout) const {
    auto drop = [&](Tensor x) {
        if (dropout.training && dropout.p > 0.0 && dropout.rng)
            return ad::dropout(x, dropout.p, *dropout.rng, true);
        return x;
    };
    Tensor h1 = drop(ad::relu(ad::linear(h, w1_, b1_)));
    Tensor h2 = drop(ad::relu(ad::linear(h1, w2_, b2_)));
    return ad::linear(h2, w3_, b3_);
}

} // namespace tigre
