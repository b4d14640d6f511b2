#pragma once

#include <vector>

#include "tbp/kern/kernels.hpp"

namespace tbp::pexit {

// Gauss-Hermite quadrature rule (physicists' weight e^{-x^2}): roots and
// weights from a Golub-Welsch eigen-decomposition of the Jacobi matrix.
struct GaussHermiteRule {
    std::vector<double> roots;   // ascending, symmetric about 0
    std::vector<double> weights; // positive, sum sqrt(pi)

    static GaussHermiteRule compute(int num_points);
    static const GaussHermiteRule& standard(); // 100 points, cached
};

// Mutual information of a consistent Gaussian LLR with standard deviation
// sigma on a binary-input AWGN channel, evaluated by Gauss-Hermite
// quadrature. Strictly increasing, J(0)=0, J(inf)=1.
class JFunction {
public:
    explicit JFunction(int num_points = 100);
    explicit JFunction(GaussHermiteRule rule);

    double operator()(double sigma) const;
    double derivative(double sigma) const;

    // sigma with |J(sigma) - mi| <= 1e-12, bracketed bisection on the
    // monotone J. Domain [0, 1).
    double inverse(double mi) const;

    int num_points() const { return static_cast<int>(rule_.roots.size()); }
    const GaussHermiteRule& rule() const { return rule_; }

private:
    GaussHermiteRule rule_;
    std::vector<double> norm_weights_; // weights / sqrt(pi)
};

// Shared defaults (mu = 100).
const JFunction& default_j();
double j_function(double sigma);
double j_inverse(double mi);

} // namespace tbp::pexit
