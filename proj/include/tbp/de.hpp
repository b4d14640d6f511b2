#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "tbp/pexit.hpp"
#include "tbp/type_description.hpp"

namespace tbp::de {

struct DEConfig {
    int population = 20;      // NP, >= 4
    double weight = 0.5;      // F
    double crossover = 0.9;   // CR
    int generations = 200;    // G
    std::uint64_t seed = 1;
    int threads = 1;          // parallel fitness evaluation width
    pexit::ThresholdSearch search{-10.0, 10.0, 0.01};
    pexit::PexitOptions pexit_options{};
    std::optional<std::vector<int>> initial_candidate; // injected into slot 0
};

// Fitness of one candidate: threshold in dB (lower is better), ties broken by
// fewer iterations at the threshold, then lexicographically smaller counts.
struct Fitness {
    double threshold_db = std::numeric_limits<double>::infinity();
    int iterations = std::numeric_limits<int>::max();
    std::vector<int> counts;

    bool operator<(const Fitness& other) const {
        if (threshold_db != other.threshold_db) return threshold_db < other.threshold_db;
        if (iterations != other.iterations) return iterations < other.iterations;
        return counts < other.counts;
    }
    bool operator<=(const Fitness& other) const { return !(other < *this); }
    bool valid() const { return threshold_db < std::numeric_limits<double>::infinity(); }
};

// Memoized threshold evaluation keyed by the integer counts. Safe for
// concurrent lookup/insert; identical keys always map to identical values, so
// last-writer-wins is harmless.
class FitnessCache {
public:
    FitnessCache(const TypeDescription& t, pexit::ThresholdSearch search, pexit::PexitOptions options);

    // +inf sentinel for invalid or undecodable candidates
    Fitness evaluate(const std::vector<int>& counts);

    bool contains(const std::vector<int>& counts) const;
    std::uint64_t computed() const { return computed_; }

private:
    const TypeDescription& t_;
    pexit::ThresholdSearch search_;
    pexit::PexitOptions options_;
    mutable std::mutex mutex_;
    std::map<std::vector<int>, Fitness> cache_;
    std::uint64_t computed_ = 0;
};

struct GenerationStats {
    int generation = 0;
    double best_threshold_db = 0.0;
    double mean_threshold_db = 0.0; // over valid candidates
    std::uint64_t evaluations = 0;  // cumulative distinct thresholds computed
    std::uint64_t cache_hits = 0;   // cumulative
};

struct OptimizeResult {
    OccurrenceAssignment best;
    pexit::Threshold best_threshold;
    std::vector<GenerationStats> history;
    std::uint64_t evaluations = 0;
    std::uint64_t cache_hits = 0;
};

// Map a real vector onto the integer simplex {counts >= 0, sum = h}:
// clamp negatives, rescale, round by largest remainder. Idempotent on valid
// integer compositions; all-zero input falls back to the uniform composition.
std::vector<int> repair(const std::vector<double>& raw, int total);

// Canonical DE/rand/1/bin over the continuous relaxation of the counts
// simplex; every evaluation goes through repair. Deterministic in the seed.
// An external cache may be supplied to share thresholds across runs.
OptimizeResult optimize(const TypeDescription& t, int total_occurrences, const DEConfig& cfg,
                        FitnessCache* shared_cache = nullptr);

// Every valid occurrence assignment with the given h, in lexicographic count
// order (all weak compositions of h into S parts, minus invalid ones).
// Refuses when the search space C(S+h-1, h-1) exceeds `limit`.
std::vector<OccurrenceAssignment> enumerate_assignments(const TypeDescription& t, int total_occurrences,
                                                        std::uint64_t limit = 100000);

// The weak compositions themselves (also the enumeration oracle's currency).
std::vector<std::vector<int>> enumerate_compositions(int parts, int total);

} // namespace tbp::de
