#include "tbp/skr.hpp"

#include "tbp/errors.hpp"
#include "tbp/pexit.hpp"

namespace tbp::sim {

double secret_key_rate(const SkrInputs& s) {
    if (s.fer < 0.0 || s.fer > 1.0) throw ValidationError("skr: FER must be in [0, 1]");
    if (s.beta < 0.0) throw ValidationError("skr: beta must be non-negative");
    if (s.i_ab < 0.0) throw ValidationError("skr: I_AB must be non-negative");
    if (s.chi_be < 0.0) throw ValidationError("skr: chi_BE must be non-negative");
    return (1.0 - s.fer) * (s.beta * s.i_ab - s.chi_be);
}

OperatingPoint operating_point(Rational rate, double es_n0_db, double fer, double chi_be) {
    OperatingPoint p;
    p.i_ab = pexit::bi_awgn_capacity(es_n0_db);
    p.beta = pexit::reconciliation_efficiency(rate, es_n0_db);
    p.beta_valid = p.beta <= 1.0;
    p.skr = secret_key_rate(SkrInputs{fer, p.beta, p.i_ab, chi_be});
    return p;
}

} // namespace tbp::sim
