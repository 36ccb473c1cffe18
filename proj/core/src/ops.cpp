#include "tigre/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tigre/errors.hpp"

namespace tigre::ad {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw EngineError(msg);
}

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape() == b.shape(); }

void maybe_record(std::vector<Tensor> inputs, const Tensor& out, std::function<void()> rule) {
    if (Tape* tape = active_tape(); tape && out.requires_grad())
        tape->record(std::move(inputs), out, std::move(rule));
}

bool any_grad(const std::vector<Tensor>& ts) {
    return std::any_of(ts.begin(), ts.end(), [](const Tensor& t) { return t.requires_grad(); });
}

// C[m,n] += A[m,k] * B[k,n]
void matmul_acc(const double* a, const double* b, double* c,
                std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue;
            const double* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

// C[m,n] += A[m,k] * B[n,k]^T
void matmul_nt_acc(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = b + j * k;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            crow[j] += acc;
        }
    }
}

// C[k,n] += A[m,k]^T * B[m,n]
void matmul_tn_acc(const double* a, const double* b, double* c,
                   std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        const double* brow = b + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = arow[p];
            if (av == 0.0) continue;
            double* crow = c + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

Tensor elementwise_binary(const Tensor& a, const Tensor& b, const char* name,
                          double (*fwd)(double, double), int mode /*0=add,1=sub,2=mul*/) {
    require(same_shape(a, b), "elementwise op: shape mismatch");
    std::vector<double> out(a.size());
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(av[i], bv[i]);
    Tensor y = Tensor::from(a.shape(), std::move(out), a.requires_grad() || b.requires_grad());
    check_finite(y, name);
    maybe_record({a, b}, y, [a, b, y, mode]() mutable {
        auto g = y.grad();
        if (a.requires_grad()) {
            auto ga = a.grad_mut();
            if (mode == 2) {
                auto bv = b.values();
                for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
            } else {
                for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
            }
        }
        if (b.requires_grad()) {
            auto gb = b.grad_mut();
            if (mode == 0) {
                for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
            } else if (mode == 1) {
                for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
            } else {
                auto av = a.values();
                for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
            }
        }
    });
    return y;
}

Tensor elementwise_unary(const Tensor& x, const char* name, double (*fwd)(double),
                         double (*dydx_from_xy)(double x, double y)) {
    std::vector<double> out(x.size());
    auto xv = x.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(xv[i]);
    Tensor y = Tensor::from(x.shape(), std::move(out), x.requires_grad());
    check_finite(y, name);
    maybe_record({x}, y, [x, y, dydx_from_xy]() mutable {
        auto g = y.grad();
        auto gx = x.grad_mut();
        auto xv = x.values();
        auto yv = y.values();
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * dydx_from_xy(xv[i], yv[i]);
    });
    return y;
}

} // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    return elementwise_binary(a, b, "add", [](double x, double y) { return x + y; }, 0);
}

Tensor sub(const Tensor& a, const Tensor& b) {
    return elementwise_binary(a, b, "subtract", [](double x, double y) { return x - y; }, 1);
}

Tensor mul(const Tensor& a, const Tensor& b) {
    return elementwise_binary(a, b, "multiply", [](double x, double y) { return x * y; }, 2);
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    require(a.shape().size() == 2 && b.shape().size() == 2, "matmul: rank-2 tensors required");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    require(b.rows() == k, "matmul: inner dimensions do not match");
    std::vector<double> out(m * n, 0.0);
    matmul_acc(a.values().data(), b.values().data(), out.data(), m, k, n);
    Tensor y = Tensor::from({m, n}, std::move(out), a.requires_grad() || b.requires_grad());
    check_finite(y, "matmul");
    maybe_record({a, b}, y, [a, b, y, m, k, n]() mutable {
        auto g = y.grad();
        if (a.requires_grad())
            matmul_nt_acc(g.data(), b.values().data(), a.grad_mut().data(), m, n, k);
        if (b.requires_grad())
            matmul_tn_acc(a.values().data(), g.data(), b.grad_mut().data(), m, k, n);
    });
    return y;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
    require(!parts.empty(), "concat: no inputs");
    const std::size_t rank = parts.front().shape().size();
    const std::size_t rows = parts.front().rows();
    std::size_t total_cols = 0;
    for (const auto& p : parts) {
        require(p.shape().size() == rank, "concat: mixed ranks");
        require(p.rows() == rows, "concat: row counts differ");
        total_cols += p.cols();
    }
    Shape out_shape = rank >= 2 ? Shape{rows, total_cols} : Shape{total_cols};
    std::vector<double> out(rows * total_cols);
    std::size_t col_base = 0;
    for (const auto& p : parts) {
        const std::size_t c = p.cols();
        auto pv = p.values();
        for (std::size_t r = 0; r < rows; ++r)
            std::copy_n(pv.data() + r * c, c, out.data() + r * total_cols + col_base);
        col_base += c;
    }
    Tensor y = Tensor::from(std::move(out_shape), std::move(out), any_grad(parts));
    check_finite(y, "concat");
    maybe_record(parts, y, [parts, y, rows, total_cols]() mutable {
        auto g = y.grad();
        std::size_t col_base = 0;
        for (auto& p : parts) {
            const std::size_t c = p.cols();
            if (p.requires_grad()) {
                auto gp = p.grad_mut();
                for (std::size_t r = 0; r < rows; ++r)
                    for (std::size_t j = 0; j < c; ++j)
                        gp[r * c + j] += g[r * total_cols + col_base + j];
            }
            col_base += c;
        }
    });
    return y;
}

Tensor sigmoid(const Tensor& x) {
    return elementwise_unary(
        x, "sigmoid",
        [](double v) { return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); },
        [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& x) {
    return elementwise_unary(
        x, "tanh", [](double v) { return std::tanh(v); },
        [](double, double y) { return 1.0 - y * y; });
}

Tensor relu(const Tensor& x) {
    return elementwise_unary(
        x, "relu", [](double v) { return v > 0.0 ? v : 0.0; },
        [](double xv, double) { return xv > 0.0 ? 1.0 : 0.0; });
}

Tensor softmax_rows(const Tensor& x) {
    const std::size_t rows = x.rows(), cols = x.cols();
    require(cols > 0, "softmax: empty rows");
    std::vector<double> out(x.size());
    auto xv = x.values();
    for (std::size_t r = 0; r < rows; ++r) {
        const double* in = xv.data() + r * cols;
        double* o = out.data() + r * cols;
        double mx = in[0];
        for (std::size_t j = 1; j < cols; ++j) mx = std::max(mx, in[j]);
        double total = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            o[j] = std::exp(in[j] - mx);
            total += o[j];
        }
        for (std::size_t j = 0; j < cols; ++j) o[j] /= total;
    }
    Tensor y = Tensor::from(x.shape(), std::move(out), x.requires_grad());
    check_finite(y, "softmax");
    maybe_record({x}, y, [x, y, rows, cols]() mutable {
        auto g = y.grad();
        auto yv = y.values();
        auto gx = x.grad_mut();
        for (std::size_t r = 0; r < rows; ++r) {
            const double* gr = g.data() + r * cols;
            const double* yr = yv.data() + r * cols;
            double dot = 0.0;
            for (std::size_t j = 0; j < cols; ++j) dot += gr[j] * yr[j];
            double* gxr = gx.data() + r * cols;
            for (std::size_t j = 0; j < cols; ++j) gxr[j] += yr[j] * (gr[j] - dot);
        }
    });
    return y;
}

Tensor dropout(const Tensor& x, double p, std::mt19937_64& rng, bool training) {
    require(p >= 0.0 && p < 1.0, "dropout: p must be in [0,1)");
    if (!training || p == 0.0) return x;
    const double keep = 1.0 - p;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto mask = std::make_shared<std::vector<double>>(x.size());
    for (auto& m : *mask) m = unit(rng) < p ? 0.0 : 1.0 / keep;
    std::vector<double> out(x.size());
    auto xv = x.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * (*mask)[i];
    Tensor y = Tensor::from(x.shape(), std::move(out), x.requires_grad());
    check_finite(y, "dropout");
    maybe_record({x}, y, [x, y, mask]() mutable {
        auto g = y.grad();
        auto gx = x.grad_mut();
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (*mask)[i];
    });
    return y;
}

Tensor scale(const Tensor& x, double factor) {
    std::vector<double> out(x.size());
    auto xv = x.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * factor;
    Tensor y = Tensor::from(x.shape(), std::move(out), x.requires_grad());
    check_finite(y, "scale");
    maybe_record({x}, y, [x, y, factor]() mutable {
        auto g = y.grad();
        auto gx = x.grad_mut();
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * factor;
    });
    return y;
}

Tensor sum(const Tensor& x) {
    double total = 0.0;
    for (double v : x.values()) total += v;
    Tensor y = Tensor::from({1}, {total}, x.requires_grad());
    check_finite(y, "sum");
    maybe_record({x}, y, [x, y]() mutable {
        const double g = y.grad()[0];
        auto gx = x.grad_mut();
        for (auto& v : gx) v += g;
    });
    return y;
}

Tensor mean(const Tensor& x) {
    require(x.size() > 0, "mean: empty tensor");
    double total = 0.0;
    for (double v : x.values()) total += v;
    const double inv = 1.0 / static_cast<double>(x.size());
    Tensor y = Tensor::from({1}, {total * inv}, x.requires_grad());
    check_finite(y, "mean");
    maybe_record({x}, y, [x, y, inv]() mutable {
        const double g = y.grad()[0] * inv;
        auto gx = x.grad_mut();
        for (auto& v : gx) v += g;
    });
    return y;
}

Tensor transpose(const Tensor& x) {
    require(x.shape().size() == 2, "transpose: rank-2 tensor required");
    const std::size_t m = x.rows(), n = x.cols();
    std::vector<double> out(x.size());
    auto xv = x.values();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j * m + i] = xv[i * n + j];
    Tensor y = Tensor::from({n, m}, std::move(out), x.requires_grad());
    maybe_record({x}, y, [x, y, m, n]() mutable {
        auto g = y.grad();
        auto gx = x.grad_mut();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) gx[i * n + j] += g[j * m + i];
    });
    return y;
}

Tensor add_bias(const Tensor& x, const Tensor& b) {
    const std::size_t n = x.rows(), d = x.cols();
    require(b.size() == d, "add_bias: bias length != column count");
    std::vector<double> out(x.size());
    auto xv = x.values();
    auto bv = b.values();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < d; ++j) out[r * d + j] = xv[r * d + j] + bv[j];
    Tensor y = Tensor::from(x.shape(), std::move(out), x.requires_grad() || b.requires_grad());
    check_finite(y, "add_bias");
    maybe_record({x, b}, y, [x, b, y, n, d]() mutable {
        auto g = y.grad();
        if (x.requires_grad()) {
            auto gx = x.grad_mut();
            for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
        }
        if (b.requires_grad()) {
            auto gb = b.grad_mut();
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t j = 0; j < d; ++j) gb[j] += g[r * d + j];
        }
    });
    return y;
}

Tensor log_sigmoid(const Tensor& x) {
    // log sigma(x) = min(x, 0) - log1p(exp(-|x|))
    return elementwise_unary(
        x, "log_sigmoid",
        [](double v) { return std::min(v, 0.0) - std::log1p(std::exp(-std::abs(v))); },
        [](double xv, double) {
            return xv >= 0.0 ? std::exp(-xv) / (1.0 + std::exp(-xv)) : 1.0 / (1.0 + std::exp(xv));
        });
}

Tensor select_rows(const Tensor& x, const std::vector<std::size_t>& indices) {
    require(x.shape().size() == 2, "select_rows: rank-2 tensor required");
    const std::size_t d = x.cols();
    std::vector<double> out(indices.size() * d);
    auto xv = x.values();
    for (std::size_t r = 0; r < indices.size(); ++r) {
        require(indices[r] < x.rows(), "select_rows: index out of range");
        std::copy_n(xv.data() + indices[r] * d, d, out.data() + r * d);
    }
    Tensor y = Tensor::from({indices.size(), d}, std::move(out), x.requires_grad());
    maybe_record({x}, y, [x, y, indices, d]() mutable {
        auto g = y.grad();
        auto gx = x.grad_mut();
        for (std::size_t r = 0; r < indices.size(); ++r)
            for (std::size_t j = 0; j < d; ++j) gx[indices[r] * d + j] += g[r * d + j];
    });
    return y;
}

Tensor pad_rows(const Tensor& x, std::size_t total_rows) {
    require(x.shape().size() == 2, "pad_rows: rank-2 tensor required");
    const std::size_t m = x.shape()[0], d = x.cols();
    require(total_rows >= m, "pad_rows: cannot shrink");
    if (total_rows == m) return x;
    std::vector<double> out(total_rows * d, 0.0);
    auto xv = x.values();
    std::copy(xv.begin(), xv.end(), out.begin());
    Tensor y = Tensor::from({total_rows, d}, std::move(out), x.requires_grad());
    maybe_record({x}, y, [x, y, m, d]() mutable {
        auto g = y.grad();
        auto gx = x.grad_mut();
        for (std::size_t i = 0; i < m * d; ++i) gx[i] += g[i];
    });
    return y;
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
    return add_bias(matmul(x, w), b);
}

Tensor apply_primitive(OpKind kind, const std::vector<Tensor>& inputs,
                       const PrimitiveOptions& options) {
    auto one = [&]() -> const Tensor& {
        require(inputs.size() == 1, "primitive expects one input");
        return inputs[0];
    };
    auto two = [&]() {
        require(inputs.size() == 2, "primitive expects two inputs");
    };
    switch (kind) {
        case OpKind::Add: two(); return add(inputs[0], inputs[1]);
        case OpKind::Subtract: two(); return sub(inputs[0], inputs[1]);
        case OpKind::Multiply: two(); return mul(inputs[0], inputs[1]);
        case OpKind::MatMul: two(); return matmul(inputs[0], inputs[1]);
        case OpKind::ConcatLastAxis: return concat_cols(inputs);
        case OpKind::Sigmoid: return sigmoid(one());
        case OpKind::Tanh: return tanh(one());
        case OpKind::SoftmaxLastAxis: return softmax_rows(one());
        case OpKind::Relu: return relu(one());
        case OpKind::Dropout:
            require(options.rng != nullptr, "dropout primitive needs an RNG");
            return dropout(one(), options.dropout_p, *options.rng, options.training);
        case OpKind::Scale: return scale(one(), options.scale_factor);
        case OpKind::Sum: return sum(one());
        case OpKind::Mean: return mean(one());
    }
    throw EngineError("apply_primitive: unknown op kind");
}

bool grad_check(const std::function<Tensor(const std::vector<Tensor>&)>& f,
                const std::vector<Tensor>& point, double tol, double* max_rel_err) {
    // Analytic pass.
    std::vector<std::vector<double>> analytic;
    {
        Tape tape;
        TapeScope scope(tape);
        Tensor y = f(point);
        if (y.size() != 1) throw EngineError("grad_check: f must be scalar-valued");
        for (auto& p : point)
            if (p.requires_grad()) const_cast<Tensor&>(p).zero_grad();
        tape.backward(y);
        for (const auto& p : point) {
            if (!p.requires_grad()) continue;
            analytic.emplace_back(p.grad().begin(), p.grad().end());
        }
    }

    // Central finite differences, h = 1e-6.
    const double h = 1e-6;
    double worst = 0.0;
    std::size_t slot = 0;
    for (const auto& p : point) {
        if (!p.requires_grad()) continue;
        auto vals = const_cast<Tensor&>(p).values_mut();
        for (std::size_t i = 0; i < vals.size(); ++i) {
            const double keep = vals[i];
            vals[i] = keep + h;
            const double up = f(point).item();
            vals[i] = keep - h;
            const double down = f(point).item();
            vals[i] = keep;
            const double fd = (up - down) / (2.0 * h);
            const double an = analytic[slot][i];
            const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1.0});
            worst = std::max(worst, rel);
        }
        ++slot;
    }
    if (max_rel_err) *max_rel_err = worst;
    return worst <= tol;
}

} // namespace tigre::ad
