#include "tbp/jfunction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tbp/errors.hpp"

namespace tbp::pexit {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kInvLn2 = 1.4426950408889634073599246810019;

// Implicit-shift QL on a symmetric tridiagonal matrix, tracking only the
// first row of the eigenvector matrix (all Golub-Welsch needs).
void tridiag_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first_row) {
    const int n = static_cast<int>(diag.size());
    off.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("gauss-hermite: eigenvalue iteration stalled");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    f = first_row[i + 1];
                    first_row[i + 1] = s * first_row[i] + c * f;
                    first_row[i] = c * first_row[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

GaussHermiteRule GaussHermiteRule::compute(int num_points) {
    if (num_points < 1) throw ValidationError("gauss-hermite: need at least one point");
    const int n = num_points;
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    std::vector<double> off(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
    for (int i = 1; i < n; ++i) off[static_cast<std::size_t>(i - 1)] = std::sqrt(i / 2.0);
    std::vector<double> first(static_cast<std::size_t>(n), 0.0);
    first[0] = 1.0;

    tridiag_ql(diag, off, first);

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return diag[static_cast<std::size_t>(a)] < diag[static_cast<std::size_t>(b)];
    });

    GaussHermiteRule rule;
    rule.roots.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        rule.roots[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        const double f = first[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        rule.weights[static_cast<std::size_t>(i)] = kSqrtPi * f * f;
    }
    return rule;
}

const GaussHermiteRule& GaussHermiteRule::standard() {
    static const GaussHermiteRule rule = compute(100);
    return rule;
}

JFunction::JFunction(int num_points)
    : JFunction(num_points == 100 ? GaussHermiteRule::standard() : GaussHermiteRule::compute(num_points)) {}

JFunction::JFunction(GaussHermiteRule rule) : rule_(std::move(rule)) {
    norm_weights_.reserve(rule_.weights.size());
    for (double w : rule_.weights) norm_weights_.push_back(w / kSqrtPi);
}

double JFunction::operator()(double sigma) const {
    if (sigma < 0.0) throw std::domain_error("j_function: sigma must be non-negative");
    if (sigma == 0.0) return 0.0;
    // E over tau ~ N(sigma^2/2, sigma^2) of log2(1 + e^-tau), with
    // tau = sigma^2/2 + sqrt(2) sigma x and x the Hermite nodes.
    const double loss = kern::active().weighted_log2_1pexp(rule_.roots.data(), norm_weights_.data(),
                                                           rule_.roots.size(), kSqrt2 * sigma,
                                                           -0.5 * sigma * sigma);
    return std::clamp(1.0 - loss, 0.0, 1.0);
}

double JFunction::derivative(double sigma) const {
    if (sigma < 0.0) throw std::domain_error("j_function: sigma must be non-negative");
    const std::size_t n = rule_.roots.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rule_.roots[i];
        const double z = -0.5 * sigma * sigma - kSqrt2 * sigma * x; // exponent of e^-tau
        // d/dsigma log2(1+e^z) = sigmoid(z) * dz/dsigma / ln2
        const double sig = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
        acc += norm_weights_[i] * sig * (-sigma - kSqrt2 * x);
    }
    return -acc * kInvLn2;
}

double JFunction::inverse(double mi) const {
    if (mi < 0.0 || mi >= 1.0) throw std::domain_error("j_inverse: mutual information must be in [0, 1)");
    if (mi == 0.0) return 0.0;

    double lo = 0.0;
    double hi = 1.0;
    while ((*this)(hi) < mi) {
        lo = hi;
        hi *= 2.0;
        if (hi > 256.0) break; // J(256) is 1 to double precision
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double val = (*this)(mid);
        if (std::abs(val - mi) <= 1e-12) return mid;
        if (val < mi)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, lo)) break;
    }
    return 0.5 * (lo + hi);
}

const JFunction& default_j() {
    static const JFunction j(100);
    return j;
}

double j_function(double sigma) { return default_j()(sigma); }
double j_inverse(double mi) { return default_j().inverse(mi); }

} // namespace tbp::pexit
