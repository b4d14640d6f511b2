// AVX2+FMA variants of the hot kernels. Compiled with -mavx2 -mfma in its own
// translation unit; selected at runtime only when the CPU reports support.
#ifdef TBP_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "tbp/kern/kernels.hpp"

namespace tbp::kern {

namespace {

// ---- float8 exp/log (Cephes polynomials) ----

inline __m256 exp_ps(__m256 x) {
    const __m256 hi = _mm256_set1_ps(88.3762626647949f);
    const __m256 lo = _mm256_set1_ps(-87.3365478515625f);
    const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
    const __m256 c1 = _mm256_set1_ps(0.693359375f);
    const __m256 c2 = _mm256_set1_ps(-2.12194440e-4f);
    const __m256 one = _mm256_set1_ps(1.0f);

    x = _mm256_min_ps(_mm256_max_ps(x, lo), hi);

    __m256 fx = _mm256_fmadd_ps(x, log2e, _mm256_set1_ps(0.5f));
    fx = _mm256_floor_ps(fx);

    x = _mm256_fnmadd_ps(fx, c1, x);
    x = _mm256_fnmadd_ps(fx, c2, x);

    const __m256 z = _mm256_mul_ps(x, x);
    __m256 y = _mm256_set1_ps(1.9875691500e-4f);
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(5.0000001201e-1f));
    y = _mm256_fmadd_ps(y, z, x);
    y = _mm256_add_ps(y, one);

    const __m256i n = _mm256_cvttps_epi32(fx);
    const __m256i pow2n = _mm256_slli_epi32(_mm256_add_epi32(n, _mm256_set1_epi32(0x7f)), 23);
    return _mm256_mul_ps(y, _mm256_castsi256_ps(pow2n));
}

inline __m256 log_ps(__m256 x) {
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 min_norm = _mm256_castsi256_ps(_mm256_set1_epi32(0x00800000));
    x = _mm256_max_ps(x, min_norm); // no zero/denormal input

    __m256i xi = _mm256_castps_si256(x);
    __m256i emm0 = _mm256_srli_epi32(xi, 23);
    emm0 = _mm256_sub_epi32(emm0, _mm256_set1_epi32(0x7f));
    __m256 e = _mm256_cvtepi32_ps(emm0);

    xi = _mm256_and_si256(xi, _mm256_set1_epi32(0x007fffff));
    xi = _mm256_or_si256(xi, _mm256_castps_si256(_mm256_set1_ps(0.5f)));
    x = _mm256_castsi256_ps(xi);

    e = _mm256_add_ps(e, one);
    const __m256 sqrthf = _mm256_set1_ps(0.707106781186547524f);
    const __m256 mask = _mm256_cmp_ps(x, sqrthf, _CMP_LT_OQ);
    const __m256 tmp = _mm256_and_ps(x, mask);
    x = _mm256_sub_ps(x, one);
    e = _mm256_sub_ps(e, _mm256_and_ps(one, mask));
    x = _mm256_add_ps(x, tmp);

    const __m256 z = _mm256_mul_ps(x, x);
    __m256 y = _mm256_set1_ps(7.0376836292e-2f);
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(-1.1514610310e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.1676998740e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(-1.2420140846e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.4249322787e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(-1.6668057665e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(2.0000714765e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(-2.4999993993e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(3.3333331174e-1f));
    y = _mm256_mul_ps(y, _mm256_mul_ps(x, z));

    y = _mm256_fmadd_ps(e, _mm256_set1_ps(-2.12194440e-4f), y);
    y = _mm256_fnmadd_ps(z, _mm256_set1_ps(0.5f), y);
    x = _mm256_add_ps(x, y);
    x = _mm256_fmadd_ps(e, _mm256_set1_ps(0.693359375f), x);
    return x;
}

// ---- double4 exp and ln(1+v) ----

inline __m256d exp_pd(__m256d x) {
    const __m256d hi = _mm256_set1_pd(708.0);
    const __m256d lo = _mm256_set1_pd(-708.0);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    __m256d fx = _mm256_fmadd_pd(x, log2e, _mm256_set1_pd(0.5));
    fx = _mm256_floor_pd(fx);

    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    __m256d r = _mm256_fnmadd_pd(fx, c1, x);
    r = _mm256_fnmadd_pd(fx, c2, r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);

    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000005e0));

    const __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    __m256d y = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

    // scale by 2^n through the exponent field
    const __m128i n32 = _mm256_cvtpd_epi32(fx);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i pow2n = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(y, _mm256_castsi256_pd(pow2n));
}

// ln(1 + v) for v in [0, 1]: atanh series in s = v / (2 + v), s <= 1/3.
inline __m256d log1p_unit_pd(__m256d v) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d s = _mm256_div_pd(v, _mm256_add_pd(two, v));
    const __m256d u = _mm256_mul_pd(s, s);
    // sum_{j} u^j / (2j+1), enough terms for |s| <= 1/3 at double precision
    __m256d p = _mm256_set1_pd(1.0 / 35.0);
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 33.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 31.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 29.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 27.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 25.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 23.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 21.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 19.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 17.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 15.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, u, _mm256_set1_pd(1.0));
    return _mm256_mul_pd(_mm256_mul_pd(two, s), p);
}

void tanh_half_avx2(const float* x, float* y, std::size_t n) {
    const __m256 cap = _mm256_set1_ps(30.0f);
    const __m256 one = _mm256_set1_ps(1.0f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_loadu_ps(x + i);
        v = _mm256_min_ps(_mm256_max_ps(v, _mm256_sub_ps(_mm256_setzero_ps(), cap)), cap);
        const __m256 e = exp_ps(v);
        const __m256 t = _mm256_div_ps(_mm256_sub_ps(e, one), _mm256_add_ps(e, one));
        _mm256_storeu_ps(y + i, t);
    }
    for (; i < n; ++i) y[i] = std::tanh(0.5f * x[i]);
}

void atanh2_avx2(const float* x, float* y, std::size_t n, float msg_clamp) {
    const __m256 unit = _mm256_set1_ps(1.0f - 1e-7f);
    const __m256 one = _mm256_set1_ps(1.0f);
    const __m256 clamp = _mm256_set1_ps(msg_clamp);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 p = _mm256_loadu_ps(x + i);
        p = _mm256_min_ps(_mm256_max_ps(p, _mm256_sub_ps(_mm256_setzero_ps(), unit)), unit);
        const __m256 r = _mm256_div_ps(_mm256_add_ps(one, p), _mm256_sub_ps(one, p));
        __m256 m = log_ps(r);
        m = _mm256_min_ps(_mm256_max_ps(m, _mm256_sub_ps(_mm256_setzero_ps(), clamp)), clamp);
        _mm256_storeu_ps(y + i, m);
    }
    for (; i < n; ++i) {
        const float p = std::clamp(x[i], -(1.0f - 1e-7f), 1.0f - 1e-7f);
        y[i] = std::clamp(std::log((1.0f + p) / (1.0f - p)), -msg_clamp, msg_clamp);
    }
}

double weighted_log2_1pexp_avx2(const double* x, const double* w, std::size_t n, double b, double c) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599246810019);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d z = _mm256_fnmadd_pd(vb, xi, vc);
        // log2(1+e^z) = max(z,0)*log2e + ln(1+e^-|z|)*log2e
        const __m256d pos = _mm256_max_pd(z, zero);
        const __m256d nabs = _mm256_min_pd(z, _mm256_sub_pd(zero, z));
        const __m256d v = exp_pd(nabs);
        const __m256d t = _mm256_mul_pd(_mm256_add_pd(pos, log1p_unit_pd(v) /* ln */), log2e);
        // note: pos*log2e + ln(...)*log2e factored as (pos + ln)*log2e
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), t, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double z = c - b * x[i];
        const double za = z > 0.0 ? z : -z;
        const double t = ((z > 0.0 ? z : 0.0) + std::log1p(std::exp(-za))) * 1.4426950408889634073599246810019;
        sum += w[i] * t;
    }
    return sum;
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels table{tanh_half_avx2, atanh2_avx2, weighted_log2_1pexp_avx2};
    return table;
}

} // namespace tbp::kern

#endif // TBP_HAVE_AVX2
