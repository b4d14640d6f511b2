#pragma once

#include <cstdint>
#include <vector>

#include "tbp/lifting.hpp"

namespace tbp::sim {

struct StopRule {
    std::uint64_t max_frames = 1000000;
    int target_frame_errors = 100; // 0 disables early stop
};

struct MonteCarloRecord {
    double es_n0_db = 0.0;
    double eb_n0_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_counted = 0;
    double fer = 0.0;
    double ber = 0.0;
    double fer_ci_lo = 0.0; // Wilson 95%
    double fer_ci_hi = 0.0;
    std::uint64_t total_iterations = 0;
    double avg_iterations = 0.0;
};

// All-zero-codeword frame error simulation over BI-AWGN. Frames are seeded by
// (seed, snr index, frame index), so results are bit-identical for any thread
// count; frames run in fixed-size batches and the stop rule is checked at
// batch boundaries.
std::vector<MonteCarloRecord> monte_carlo(const SparseParityCheckMatrix& h,
                                          const std::vector<double>& es_n0_db_grid, const StopRule& stop,
                                          std::uint64_t seed, int threads = 1, int max_decode_iter = 500);

} // namespace tbp::sim
