#include "tigre/time_encoding.hpp"

#include <cmath>

#include "tigre/errors.hpp"

namespace tigre {

using ad::Tensor;

TimeEncoder::TimeEncoder(ad::ParameterStore& params, const std::string& path,
                         std::size_t time_dim, double max_timestamp) {
    if (time_dim == 0 || time_dim % 2 != 0)
        throw ConfigError("time encoder: time_dim must be a positive even number");
    half_dim_ = time_dim / 2;
    // Geometric ladder omega_j = 10^{-(j-1) * alpha} spanning [1, 1/max_timestamp].
    const double span = std::max(max_timestamp, 1.0);
    const double alpha = half_dim_ > 1 ? std::log10(span) / static_cast<double>(half_dim_ - 1)
                                       : 0.0;
    std::vector<double> omega(half_dim_);
    for (std::size_t j = 0; j < half_dim_; ++j)
        omega[j] = std::pow(10.0, -alpha * static_cast<double>(j));
    omega_ = params.adopt(path, Tensor::from({half_dim_}, std::move(omega), true));
}

Tensor TimeEncoder::encode(const std::vector<double>& times) const {
    for (double t : times)
        if (!std::isfinite(t)) throw EngineError("time encoder: non-finite time value");

    const std::size_t n = times.size();
    const std::size_t half = half_dim_;
    const double norm = 1.0 / std::sqrt(static_cast<double>(half));
    auto ov = omega_.values();
    std::vector<double> out(n * 2 * half);
    for (std::size_t r = 0; r < n; ++r) {
        double* row = out.data() + r * 2 * half;
        for (std::size_t j = 0; j < half; ++j) {
            const double phase = ov[j] * times[r];
            row[2 * j] = std::cos(phase) * norm;
            row[2 * j + 1] = std::sin(phase) * norm;
        }
    }
    Tensor y = Tensor::from({n, 2 * half}, std::move(out), omega_.requires_grad());
    ad::check_finite(y, "time_encode");
    if (ad::Tape* tape = ad::active_tape(); tape && y.requires_grad()) {
        Tensor omega = omega_;
        tape->record({omega}, y, [omega, y, times, half, norm]() mutable {
            auto g = y.grad();
            auto gw = omega.grad_mut();
            auto ov = omega.values();
            for (std::size_t r = 0; r < times.size(); ++r) {
                const double t = times[r];
                const double* grow = g.data() + r * 2 * half;
                for (std::size_t j = 0; j < half; ++j) {
                    const double phase = ov[j] * t;
                    gw[j] += norm * t *
                             (-std::sin(phase) * grow[2 * j] + std::cos(phase) * grow[2 * j + 1]);
                }
            }
        });
    }
    return y;
}

} // namespace tigre
