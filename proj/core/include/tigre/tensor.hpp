#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace tigre::ad {

using Shape = std::vector<std::size_t>;

/// Dense row-major tensor of 64-bit floats with an optional gradient buffer.
///
/// Tensor is a shared handle: copies alias the same storage. Values of
/// ops with a differentiable input are recorded on the active Tape so that
/// Tape::backward can fill the gradient buffers in reverse order.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double value, bool requires_grad = false);
    static Tensor from(Shape shape, std::vector<double> data, bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const;
    std::size_t size() const;
    bool requires_grad() const;

    /// Rank-2 helpers; a rank-1 tensor counts as a single row.
    std::size_t rows() const;
    std::size_t cols() const;

    std::span<const double> values() const;
    std::span<double> values_mut();
    std::span<const double> grad() const;
    std::span<double> grad_mut();
    void zero_grad();

    double item() const;                       // scalar-shaped only
    double at(std::size_t r, std::size_t c) const;

    /// Stable identity of the underlying storage (for parameter bookkeeping).
    const void* id() const { return node_.get(); }

private:
    struct Node;
    std::shared_ptr<Node> node_;
};

/// Throws EngineError if any stored value is NaN or infinite.
void check_finite(const Tensor& t, const char* op_name);

/// Ordered record of executed primitive ops. Replayed in reverse by
/// backward(); cleared afterwards so a fresh tape is used per training step.
class Tape {
public:
    /// Record one op: `backward` reads the output gradient and accumulates
    /// into the inputs' gradient buffers. Inputs are kept alive by the tape.
    void record(std::vector<Tensor> inputs, Tensor output, std::function<void()> backward);

    std::size_t size() const { return entries_.size(); }

    /// Seeds d(loss)/d(loss) = 1, runs every recorded rule in reverse order,
    /// clears the tape, and returns the number of rules executed.
    std::size_t backward(const Tensor& loss);

    void clear();

private:
    struct Entry {
        std::vector<Tensor> inputs;
        Tensor output;
        std::function<void()> rule;
    };
    std::vector<Entry> entries_;
};

/// The tape ops record onto, or nullptr when recording is off (evaluation).
Tape* active_tape();

/// RAII scope installing a tape as the active one for the current thread.
class TapeScope {
public:
    explicit TapeScope(Tape& tape);
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;

private:
    Tape* previous_;
};

} // namespace tigre::ad
