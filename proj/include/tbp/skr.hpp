#pragma once

#include "tbp/rational.hpp"

namespace tbp::sim {

struct SkrInputs {
    double fer;    // frame error rate in [0, 1]
    double beta;   // reconciliation efficiency
    double i_ab;   // mutual information Alice-Bob, bits/symbol
    double chi_be; // Holevo information of the eavesdropper, bits/symbol
};

// SKR = (1 - FER) (beta I_AB - chi_BE); may be negative.
double secret_key_rate(const SkrInputs& s);

struct OperatingPoint {
    double beta = 0.0;
    double i_ab = 0.0;
    double skr = 0.0;
    bool beta_valid = false; // beta <= 1, i.e. R <= I_AB
};

// I_AB taken as the BI-AWGN capacity at es_n0_db, beta = R / I_AB.
OperatingPoint operating_point(Rational rate, double es_n0_db, double fer, double chi_be);

} // namespace tbp::sim
