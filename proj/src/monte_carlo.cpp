#include "tbp/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "tbp/channel.hpp"
#include "tbp/decoder.hpp"
#include "tbp/errors.hpp"
#include "tbp/rng.hpp"

namespace tbp::sim {

namespace {

constexpr std::uint64_t kBatch = 256;

struct FrameResult {
    std::uint32_t bit_errors = 0;
    std::uint32_t iterations = 0;
    bool frame_error = false;
};

void wilson_interval(std::uint64_t errors, std::uint64_t trials, double& lo, double& hi) {
    if (trials == 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    const double z = 1.959963984540054; // 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    lo = std::max(0.0, (center - spread) / denom);
    hi = std::min(1.0, (center + spread) / denom);
}

} // namespace

std::vector<MonteCarloRecord> monte_carlo(const SparseParityCheckMatrix& h,
                                          const std::vector<double>& es_n0_db_grid, const StopRule& stop,
                                          std::uint64_t seed, int threads, int max_decode_iter) {
    if (es_n0_db_grid.empty()) throw ValidationError("monte carlo: empty SNR grid");
    if (stop.max_frames == 0) throw ValidationError("monte carlo: max_frames must be positive");

    const double rate = h.rate().to_double();
    if (rate <= 0.0) throw ValidationError("monte carlo: non-positive code rate");
    const std::vector<std::uint8_t> zero_frame(static_cast<std::size_t>(h.cols()), 0);

    const int width = std::max(1, threads);
    std::vector<SumProductDecoder> decoders;
    decoders.reserve(static_cast<std::size_t>(width));
    for (int w = 0; w < width; ++w) decoders.emplace_back(h, max_decode_iter);

    std::vector<MonteCarloRecord> records;
    for (std::size_t snr_idx = 0; snr_idx < es_n0_db_grid.size(); ++snr_idx) {
        const double es_db = es_n0_db_grid[snr_idx];
        const double sigma_n = noise_sigma_from_es(es_db);

        MonteCarloRecord rec;
        rec.es_n0_db = es_db;
        rec.eb_n0_db = es_db - 10.0 * std::log10(rate);

        std::vector<FrameResult> results(kBatch);
        std::uint64_t next_frame = 0;
        while (next_frame < stop.max_frames) {
            const std::uint64_t batch = std::min<std::uint64_t>(kBatch, stop.max_frames - next_frame);
            std::atomic<std::uint64_t> cursor{0};
            auto worker = [&](int worker_id) {
                SumProductDecoder& decoder = decoders[static_cast<std::size_t>(worker_id)];
                std::vector<std::uint8_t> hard;
                for (;;) {
                    const std::uint64_t slot = cursor.fetch_add(1);
                    if (slot >= batch) return;
                    const std::uint64_t frame = next_frame + slot;
                    const auto llr = simulate_channel(zero_frame, sigma_n, h.punctured_bits(),
                                                      mix_seed(seed, snr_idx, frame));
                    const DecodeOutcome outcome = decoder.decode(llr, hard);
                    FrameResult fr;
                    fr.iterations = static_cast<std::uint32_t>(outcome.iterations);
                    std::uint32_t wrong = 0;
                    for (std::uint8_t bit : hard) wrong += bit;
                    fr.bit_errors = wrong;
                    fr.frame_error = wrong != 0;
                    results[slot] = fr;
                }
            };
            if (width == 1) {
                worker(0);
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < width; ++w) pool.emplace_back(worker, w);
                for (auto& th : pool) th.join();
            }

            for (std::uint64_t i = 0; i < batch; ++i) {
                const FrameResult& fr = results[i];
                rec.frames += 1;
                rec.frame_errors += fr.frame_error ? 1 : 0;
                rec.bit_errors += fr.bit_errors;
                rec.total_iterations += fr.iterations;
            }
            next_frame += batch;
            if (stop.target_frame_errors > 0 &&
                rec.frame_errors >= static_cast<std::uint64_t>(stop.target_frame_errors))
                break;
        }

        rec.bits_counted = rec.frames * static_cast<std::uint64_t>(h.cols());
        rec.fer = static_cast<double>(rec.frame_errors) / static_cast<double>(rec.frames);
        rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_counted);
        rec.avg_iterations = static_cast<double>(rec.total_iterations) / static_cast<double>(rec.frames);
        wilson_interval(rec.frame_errors, rec.frames, rec.fer_ci_lo, rec.fer_ci_hi);
        records.push_back(rec);
    }
    return records;
}

} // namespace tbp::sim
