#include "tbp/channel.hpp"

#include <algorithm>
#include <cmath>

#include "tbp/errors.hpp"
#include "tbp/rng.hpp"

namespace tbp::sim {

double noise_sigma_from_es(double es_n0_db) {
    const double es = std::pow(10.0, es_n0_db / 10.0);
    return std::sqrt(1.0 / (2.0 * es));
}

std::vector<float> simulate_channel(const std::vector<std::uint8_t>& bits, double sigma_n,
                                    const std::vector<int>& punctured_sorted, std::uint64_t seed) {
    if (!(sigma_n > 0.0)) throw ValidationError("channel: noise sigma must be positive");
    SplitMix64 rng(seed);
    const double scale = 2.0 / (sigma_n * sigma_n);
    std::vector<float> llr(bits.size());
    std::size_t punct_at = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (punct_at < punctured_sorted.size() &&
            punctured_sorted[punct_at] == static_cast<int>(i)) {
            llr[i] = 0.0f; // not transmitted
            ++punct_at;
            continue;
        }
        const double x = bits[i] ? -1.0 : 1.0;
        const double y = x + sigma_n * rng.next_gaussian();
        llr[i] = static_cast<float>(scale * y);
    }
    return llr;
}

} // namespace tbp::sim
