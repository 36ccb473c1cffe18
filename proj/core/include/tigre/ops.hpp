#pragma once

#include <random>
#include <vector>

#include "tigre/tensor.hpp"

namespace tigre::ad {

// Elementwise / linear-algebra primitives. Each op validates shapes, checks
// the output for NaN/Inf, and records itself on the active tape when any
// input requires a gradient.

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor softmax_rows(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor scale(const Tensor& x, double factor);
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);

/// Inverted dropout. Identity when `training` is false or p == 0; otherwise
/// zeroes each element with probability p and rescales survivors by 1/(1-p).
Tensor dropout(const Tensor& x, double p, std::mt19937_64& rng, bool training);

Tensor transpose(const Tensor& x);

/// Row-broadcast bias add: x is [n,d], b is [d] (or [1,d]).
Tensor add_bias(const Tensor& x, const Tensor& b);

/// Numerically stable log(sigmoid(x)).
Tensor log_sigmoid(const Tensor& x);

/// Gathers rows of x; backward scatter-adds into the source rows.
Tensor select_rows(const Tensor& x, const std::vector<std::size_t>& indices);

/// Appends zero rows until x has total_rows rows (x may have zero rows).
Tensor pad_rows(const Tensor& x, std::size_t total_rows);

/// xW + b applied row-wise.
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

enum class OpKind {
    Add,
    Subtract,
    Multiply,
    MatMul,
    ConcatLastAxis,
    Sigmoid,
    Tanh,
    SoftmaxLastAxis,
    Relu,
    Dropout,
    Scale,
    Sum,
    Mean,
};

struct PrimitiveOptions {
    double scale_factor = 1.0;
    double dropout_p = 0.0;
    std::mt19937_64* rng = nullptr;
    bool training = false;
};

/// Dispatch a primitive by kind; used by the gradient-check property suite.
Tensor apply_primitive(OpKind kind, const std::vector<Tensor>& inputs,
                       const PrimitiveOptions& options = {});

/// Compares the tape gradient of a scalar-valued function against central
/// finite differences (h = 1e-6). True iff the max relative discrepancy over
/// all elements of all differentiable inputs is <= tol.
bool grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                const std::vector<Tensor>& point, double tol,
                double* max_rel_err = nullptr);

} // namespace tigre::ad
