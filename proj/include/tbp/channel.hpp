#pragma once

#include <cstdint>
#include <vector>

namespace tbp::sim {

// Noise standard deviation of the BI-AWGN channel at Es/N0 (dB) with unit
// symbol energy: sigma_n = sqrt(1 / (2 Es/N0)).
double noise_sigma_from_es(double es_n0_db);

// BPSK (0 -> +1, 1 -> -1) over AWGN; LLR_i = 2 y_i / sigma_n^2. Punctured
// positions are not transmitted and get LLR 0. Deterministic in the seed.
std::vector<float> simulate_channel(const std::vector<std::uint8_t>& bits, double sigma_n,
                                    const std::vector<int>& punctured_sorted, std::uint64_t seed);

} // namespace tbp::sim
