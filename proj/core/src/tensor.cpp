#include "tigre/tensor.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "tigre/errors.hpp"

namespace tigre::ad {

struct Tensor::Node {
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;
    bool requires_grad = false;
};

namespace {

std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

} // namespace

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
    Tensor t;
    t.node_ = std::make_shared<Node>();
    t.node_->shape = std::move(shape);
    t.node_->values.assign(shape_numel(t.node_->shape), value);
    t.node_->requires_grad = requires_grad;
    if (requires_grad) t.node_->grad.assign(t.node_->values.size(), 0.0);
    return t;
}

Tensor Tensor::from(Shape shape, std::vector<double> data, bool requires_grad) {
    if (shape_numel(shape) != data.size())
        throw EngineError("Tensor::from: shape does not match data length");
    Tensor t;
    t.node_ = std::make_shared<Node>();
    t.node_->shape = std::move(shape);
    t.node_->values = std::move(data);
    t.node_->requires_grad = requires_grad;
    if (requires_grad) t.node_->grad.assign(t.node_->values.size(), 0.0);
    return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
    return from({1}, {value}, requires_grad);
}

const Shape& Tensor::shape() const { return node_->shape; }

std::size_t Tensor::size() const { return node_->values.size(); }

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

std::size_t Tensor::rows() const {
    return node_->shape.size() >= 2 ? node_->shape[0] : 1;
}

std::size_t Tensor::cols() const {
    const auto& s = node_->shape;
    if (s.empty()) return 1;
    return s.size() >= 2 ? s[s.size() - 1] : s[0];
}

std::span<const double> Tensor::values() const { return node_->values; }

std::span<double> Tensor::values_mut() { return node_->values; }

std::span<const double> Tensor::grad() const {
    if (!requires_grad()) throw EngineError("Tensor::grad: tensor has no gradient buffer");
    return node_->grad;
}

std::span<double> Tensor::grad_mut() {
    if (!requires_grad()) throw EngineError("Tensor::grad_mut: tensor has no gradient buffer");
    return node_->grad;
}

void Tensor::zero_grad() {
    if (requires_grad()) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

double Tensor::item() const {
    if (size() != 1) throw EngineError("Tensor::item: tensor is not scalar-shaped");
    return node_->values[0];
}

double Tensor::at(std::size_t r, std::size_t c) const {
    return node_->values[r * cols() + c];
}

void check_finite(const Tensor& t, const char* op_name) {
    for (double v : t.values()) {
        if (!std::isfinite(v))
            throw EngineError(std::string("non-finite value produced by op '") + op_name + "'");
    }
}

namespace {
thread_local Tape* g_active_tape = nullptr;
}

Tape* active_tape() { return g_active_tape; }

TapeScope::TapeScope(Tape& tape) : previous_(g_active_tape) { g_active_tape = &tape; }

TapeScope::~TapeScope() { g_active_tape = previous_; }

void Tape::record(std::vector<Tensor> inputs, Tensor output, std::function<void()> backward) {
    entries_.push_back(Entry{std::move(inputs), std::move(output), std::move(backward)});
}

std::size_t Tape::backward(const Tensor& loss) {
    if (loss.size() != 1) throw EngineError("backward: loss must be scalar-shaped");
    if (!loss.requires_grad())
        throw EngineError("backward: loss does not depend on any differentiable input");
    loss.grad_mut()[0] = 1.0;
    std::size_t executed = 0;
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        it->rule();
        ++executed;
    }
    clear();
    return executed;
}

void Tape::clear() { entries_.clear(); }

} // namespace tigre::ad
