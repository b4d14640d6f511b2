#pragma once

#include <vector>

#include "tbp/jfunction.hpp"
#include "tbp/protomatrix.hpp"
#include "tbp/rational.hpp"
#include "tbp/type_description.hpp"

namespace tbp::pexit {

// Channel operating point. Internally everything tracks the LLR variance
// sigma_ch^2 = 8 R Eb/N0 of the equivalent BI-AWGN channel.
struct ChannelQuality {
    double eb_n0_db;
    Rational rate;

    double eb_n0_linear() const;
    double es_n0_db() const; // Es/N0 = R * Eb/N0
    double sigma_ch() const; // sqrt(8 R Eb/N0)

    static ChannelQuality from_eb(double eb_db, Rational rate);
    static ChannelQuality from_es(double es_db, Rational rate);
};

struct PexitOptions {
    int max_iter = 10000;
    double tol = 1e-6;          // converged when min_j I_APP >= 1 - tol
    double stall_delta = 1e-10; // stop when min_j I_APP improves less than this
    bool exact_j = false;       // bypass the lookup tables (slow reference mode)
    int gh_points = 100;        // quadrature order; non-default implies exact evaluation
    bool record_trajectory = false;
};

struct PexitResult {
    bool converged = false;
    int iterations = 0;
    double final_min_app = 0.0;
    // iteration-major I_APP per variable node (full) or per present VN type
    // (type-based); only filled when record_trajectory is set
    std::vector<std::vector<double>> app_trajectory;
    // for the type-based run: the VN type each trajectory column refers to
    std::vector<int> trajectory_vn_types;
};

// Mutual-information evolution on a full protograph, iterated from
// I_Ec = 0: variable-node update, check-node update, a-posteriori check.
PexitResult pexit_converges(const Protomatrix& b, const ChannelQuality& ch, const PexitOptions& opt = {});

// Same recursion collapsed onto node types: entries weighted by occurrence
// counts exactly as the expanded protograph would see them, so verdicts and
// per-type trajectories match the expansion.
PexitResult tbp_pexit_converges(const TypeDescription& t, const OccurrenceAssignment& a,
                                const ChannelQuality& ch, const PexitOptions& opt = {});

struct ThresholdSearch {
    double lo_db = -10.0;
    double hi_db = 10.0;
    double precision_db = 0.01;
};

struct Threshold {
    double eb_n0_db_star = 0.0;  // upper bracket edge, PEXIT converges here
    double bracket_width_db = 0.0;
    int iterations_used = 0;     // PEXIT iterations at the star point
    bool converged_at_lo = false; // star hit the -30 dB search floor
};

// Bisected minimal Eb/N0 (dB). Auto-widens the initial bracket up to
// +-30 dB; throws UndecodableError if nothing converges even at +30 dB.
Threshold threshold(const Protomatrix& b, const ThresholdSearch& search = {}, const PexitOptions& opt = {});
Threshold tbp_threshold(const TypeDescription& t, const OccurrenceAssignment& a,
                        const ThresholdSearch& search = {}, const PexitOptions& opt = {});

// Capacity of the BI-AWGN channel at Es/N0, via J(sqrt(8 Es/N0)).
double bi_awgn_capacity(double es_n0_db);

// beta = R / I_AB; throws when the capacity is zero.
double reconciliation_efficiency(Rational rate, double es_n0_db);

// Eb/N0 (dB) at which the BI-AWGN capacity equals the rate.
double capacity_limit_eb_db(Rational rate);

} // namespace tbp::pexit
