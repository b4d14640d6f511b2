#include <algorithm>
#include <cmath>

#include "tbp/kern/kernels.hpp"

namespace tbp::kern {

namespace {

constexpr float kUnitClamp = 1.0f - 1e-7f;
constexpr double kInvLn2 = 1.4426950408889634073599246810019;

void tanh_half_scalar(const float* x, float* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::tanh(0.5f * x[i]);
}

void atanh2_scalar(const float* x, float* y, std::size_t n, float msg_clamp) {
    for (std::size_t i = 0; i < n; ++i) {
        const float p = std::clamp(x[i], -kUnitClamp, kUnitClamp);
        // 2 atanh(p) = ln((1+p)/(1-p))
        const float m = std::log((1.0f + p) / (1.0f - p));
        y[i] = std::clamp(m, -msg_clamp, msg_clamp);
    }
}

double weighted_log2_1pexp_scalar(const double* x, const double* w, std::size_t n, double b, double c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = c - b * x[i];
        // log2(1 + e^z), split for numerical stability
        double t;
        if (z > 0.0)
            t = z * kInvLn2 + std::log1p(std::exp(-z)) * kInvLn2;
        else
            t = std::log1p(std::exp(z)) * kInvLn2;
        sum += w[i] * t;
    }
    return sum;
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels table{tanh_half_scalar, atanh2_scalar, weighted_log2_1pexp_scalar};
    return table;
}

} // namespace tbp::kern
