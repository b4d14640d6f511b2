#pragma once

#include <cstddef>

namespace tbp::kern {

enum class Backend { scalar, avx2 };

// Hot inner loops shared by the decoder and the mutual-information engine.
// Each entry has a scalar reference and (on x86) an AVX2 variant; the two are
// equivalence-tested against each other.
struct Kernels {
    // y[i] = tanh(0.5 * x[i])
    void (*tanh_half)(const float* x, float* y, std::size_t n);
    // y[i] = clamp(2 * atanh(clamp(x[i], +-(1-eps))), +-msg_clamp)
    void (*atanh2)(const float* x, float* y, std::size_t n, float msg_clamp);
    // sum_i w[i] * log2(1 + exp(c - b * x[i]))
    double (*weighted_log2_1pexp)(const double* x, const double* w, std::size_t n, double b, double c);
};

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Best backend the CPU supports, overridable with TBP_KERNEL=scalar|avx2.
Backend active_backend();

const Kernels& kernels(Backend b);
const Kernels& active();

} // namespace tbp::kern
