#include "tigre/update_module.hpp"

#include <cmath>
#include <unordered_map>

#include "tigre/errors.hpp"

namespace tigre {

using ad::Tensor;

MessageEncoder::MessageEncoder(ad::ParameterStore& params, const std::string& path,
                               std::size_t input_width, std::size_t dim, std::mt19937_64& rng) {
    weight_ = params.create(path + "/w", {input_width, dim}, input_width, rng);
    bias_ = params.create(path + "/b", {dim}, input_width, rng);
}

Tensor MessageEncoder::encode_rows(const Tensor& inputs) const {
    if (inputs.cols() != weight_.shape()[0])
        throw EngineError("message encoder: input width mismatch");
    return ad::linear(inputs, weight_, bias_);
}

LatestAdjacency build_adjacency(const std::vector<std::int32_t>& active,
                                const std::vector<std::int32_t>& partners, double beta) {
    if (partners.size() != active.size())
        throw EngineError("build_adjacency: active/partner lists differ in length");
    const std::size_t n = active.size();
    std::unordered_map<std::int32_t, std::size_t> row_of;
    row_of.reserve(n);
    for (std::size_t i = 0; i < n; ++i) row_of.emplace(active[i], i);

    std::vector<double> s(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t r = partners[i];
        if (r == 0) continue;
        auto it = row_of.find(r);
        if (it == row_of.end()) continue;  // partner outside the active set
        s[i * n + it->second] = 1.0;
        s[it->second * n + i] = 1.0;
    }

    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) degree[i] += s[i * n + j];

    std::vector<double> a(n * n, 0.0);
    const double half_beta = beta / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + i] = half_beta;
        if (degree[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (s[i * n + j] == 0.0) continue;
            a[i * n + j] += half_beta * s[i * n + j] / std::sqrt(degree[i] * degree[j]);
        }
    }

    LatestAdjacency out;
    out.nodes = active;
    out.matrix = Tensor::from({n, n}, std::move(a));
    out.beta = beta;
    return out;
}

GatedOdeDynamics::GatedOdeDynamics(ad::ParameterStore& params, const std::string& path,
                                   std::size_t dim, std::mt19937_64& rng) {
    w_latest_ = params.create(path + "/w_latest", {dim, dim}, dim, rng);
    b_latest_ = params.create(path + "/b_latest", {dim}, dim, rng);
    w_neighbor_ = params.create(path + "/w_neighbor", {dim, dim}, dim, rng);
    b_neighbor_ = params.create(path + "/b_neighbor", {dim}, dim, rng);
    w_inherent_ = params.create(path + "/w_inherent", {dim, dim}, dim, rng);
    b_inherent_ = params.create(path + "/b_inherent", {dim}, dim, rng);
}

GatedOdeDynamics::Gates GatedOdeDynamics::gates(const Tensor& h0,
                                                const AblationFlags& ablation) const {
    if (ablation.no_adaptive) {
        Tensor ones = Tensor::full(h0.shape(), 1.0);
        return {ones, ones, ones};
    }
    return {ad::sigmoid(ad::linear(h0, w_latest_, b_latest_)),
            ad::sigmoid(ad::linear(h0, w_neighbor_, b_neighbor_)),
            ad::sigmoid(ad::linear(h0, w_inherent_, b_inherent_))};
}

Tensor GatedOdeDynamics::rhs(const Gates& gates, const Tensor& adjacency, const Tensor& h0,
                             const Tensor& h, const AblationFlags& ablation) const {
    if (h0.shape() != h.shape()) throw EngineError("ode rhs: state shape mismatch");
    Tensor acc;
    if (!ablation.no_latest) acc = ad::mul(gates.latest, h0);
    if (!ablation.no_neighbor) {
        Tensor neighbor = ad::mul(gates.neighbor, ad::matmul(adjacency, h));
        acc = acc.defined() ? ad::add(acc, neighbor) : neighbor;
    }
    if (!ablation.no_inherent) {
        Tensor inherent = ad::mul(gates.inherent, h);
        acc = acc.defined() ? ad::sub(acc, inherent) : ad::scale(inherent, -1.0);
    }
    if (!acc.defined()) acc = Tensor::zeros(h.shape());
    return acc;
}

Tensor GatedOdeDynamics::solve(const Tensor& adjacency, const Tensor& h0,
                               const OdeOptions& options, const AblationFlags& ablation,
                               const Tensor* time_scale) const {
    if (options.steps < 1) throw EngineError("ode solve: steps must be >= 1");
    if (options.horizon <= 0.0) throw EngineError("ode solve: horizon must be > 0");
    const Gates g = gates(h0, ablation);
    const double dt = options.horizon / static_cast<double>(options.steps);
    auto deriv = [&](const Tensor& h) {
        Tensor r = rhs(g, adjacency, h0, h, ablation);
        return time_scale ? ad::mul(r, *time_scale) : r;
    };
    Tensor h = h0;
    for (std::size_t step = 0; step < options.steps; ++step) {
        if (options.solver == OdeSolverKind::Euler) {
            h = ad::add(h, ad::scale(deriv(h), dt));
        } else {
            Tensor k1 = deriv(h);
            Tensor k2 = deriv(ad::add(h, ad::scale(k1, dt / 2.0)));
            Tensor k3 = deriv(ad::add(h, ad::scale(k2, dt / 2.0)));
            Tensor k4 = deriv(ad::add(h, ad::scale(k3, dt)));
            Tensor incr = ad::add(ad::add(ad::scale(k1, dt / 6.0), ad::scale(k2, dt / 3.0)),
                                  ad::add(ad::scale(k3, dt / 3.0), ad::scale(k4, dt / 6.0)));
            h = ad::add(h, incr);
        }
    }
    return h;
}

} // namespace tigre
