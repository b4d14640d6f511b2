#include "tbp/de.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <functional>

#include "tbp/errors.hpp"
#include "tbp/parallel.hpp"
#include "tbp/rng.hpp"

namespace tbp::de {

FitnessCache::FitnessCache(const TypeDescription& t, pexit::ThresholdSearch search, pexit::PexitOptions options)
    : t_(t), search_(search), options_(options) {}

bool FitnessCache::contains(const std::vector<int>& counts) const {
    std::lock_guard lock(mutex_);
    return cache_.count(counts) != 0;
}

Fitness FitnessCache::evaluate(const std::vector<int>& counts) {
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(counts);
        if (it != cache_.end()) return it->second;
    }
    Fitness fit;
    fit.counts = counts;
    try {
        const OccurrenceAssignment a = OccurrenceAssignment::induce(t_, counts);
        const pexit::Threshold th = pexit::tbp_threshold(t_, a, search_, options_);
        fit.threshold_db = th.eb_n0_db_star;
        fit.iterations = th.iterations_used;
    } catch (const ValidationError&) {
        // invalid candidate: +inf sentinel
    } catch (const UndecodableError&) {
        // never converges in range: +inf sentinel
    }
    std::lock_guard lock(mutex_);
    auto [it, inserted] = cache_.emplace(counts, fit);
    if (inserted) ++computed_;
    return it->second;
}

std::vector<int> repair(const std::vector<double>& raw, int total) {
    const std::size_t n = raw.size();
    if (n == 0) throw ValidationError("repair: empty vector");
    for (double x : raw) {
        if (!std::isfinite(x)) throw ValidationError("repair: non-finite input");
    }
    std::vector<double> clamped(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        clamped[i] = std::max(0.0, raw[i]);
        sum += clamped[i];
    }

    std::vector<int> counts(n, 0);
    if (sum <= 0.0) {
        // uniform composition fallback
        const int base = total / static_cast<int>(n);
        const int rem = total % static_cast<int>(n);
        for (std::size_t i = 0; i < n; ++i) counts[i] = base + (static_cast<int>(i) < rem ? 1 : 0);
        return counts;
    }

    const double scale = static_cast<double>(total) / sum;
    std::vector<double> remainder(n);
    int assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = clamped[i] * scale;
        counts[i] = static_cast<int>(std::floor(y));
        remainder[i] = y - counts[i];
        assigned += counts[i];
    }
    int deficit = total - assigned;
    // largest remainders first; ties by lower index
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t r = 0; deficit > 0; r = (r + 1) % n, --deficit) counts[order[r]] += 1;
    return counts;
}

std::vector<std::vector<int>> enumerate_compositions(int parts, int total) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(parts), 0);
    // lexicographic recursion, iteratively
    std::function<void(int, int)> rec = [&](int idx, int remaining) {
        if (idx == parts - 1) {
            current[static_cast<std::size_t>(idx)] = remaining;
            out.push_back(current);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            current[static_cast<std::size_t>(idx)] = v;
            rec(idx + 1, remaining - v);
        }
    };
    rec(0, total);
    return out;
}

std::vector<OccurrenceAssignment> enumerate_assignments(const TypeDescription& t, int total_occurrences,
                                                        std::uint64_t limit) {
    if (total_occurrences < 1) throw ValidationError("enumerate: h must be positive");
    const int s = t.num_optimizable_cn();
    if (s < 1) throw ValidationError("enumerate: no optimizable check node types");
    const BigUint size = search_space_size(s, total_occurrences);
    if (!(size <= BigUint(limit)))
        throw ValidationError("enumerate: search space has " + size.str() + " type-based protographs, above the limit of " +
                              std::to_string(limit));

    std::vector<OccurrenceAssignment> out;
    for (const auto& counts : enumerate_compositions(s, total_occurrences)) {
        try {
            out.push_back(OccurrenceAssignment::induce(t, counts));
        } catch (const ValidationError&) {
            // not a valid assignment for this family; skip
        }
    }
    return out;
}

namespace {

// deterministic per-generation evaluation: count hits sequentially, compute
// distinct new candidates in parallel
std::vector<Fitness> evaluate_generation(FitnessCache& cache, const std::vector<std::vector<int>>& keys,
                                         int threads, std::uint64_t& cache_hits) {
    std::vector<std::vector<int>> fresh;
    {
        std::vector<std::vector<int>> seen;
        for (const auto& key : keys) {
            if (cache.contains(key) || std::find(seen.begin(), seen.end(), key) != seen.end()) {
                ++cache_hits;
            } else {
                seen.push_back(key);
                fresh.push_back(key);
            }
        }
    }
    parallel_for(fresh.size(), threads, [&](std::size_t i) { cache.evaluate(fresh[i]); });
    std::vector<Fitness> out;
    out.reserve(keys.size());
    for (const auto& key : keys) out.push_back(cache.evaluate(key));
    return out;
}

GenerationStats summarize(int generation, const std::vector<Fitness>& pop, const FitnessCache& cache,
                          std::uint64_t cache_hits) {
    GenerationStats row;
    row.generation = generation;
    row.evaluations = cache.computed();
    row.cache_hits = cache_hits;
    double best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int valid = 0;
    for (const auto& f : pop) {
        if (!f.valid()) continue;
        best = std::min(best, f.threshold_db);
        sum += f.threshold_db;
        ++valid;
    }
    row.best_threshold_db = best;
    row.mean_threshold_db = valid > 0 ? sum / valid : std::numeric_limits<double>::infinity();
    return row;
}

} // namespace

OptimizeResult optimize(const TypeDescription& t, int total_occurrences, const DEConfig& cfg,
                        FitnessCache* shared_cache) {
    if (total_occurrences < 1)
        throw ValidationError("optimize: h must be positive (the rate (l-k)/(l+h) is undefined otherwise)");
    tbp_design_rate(t, total_occurrences); // validates l > k
    if (cfg.population < 4) throw ValidationError("optimize: population must be at least 4");
    if (cfg.weight <= 0.0 || cfg.weight > 2.0) throw ValidationError("optimize: weight F must be in (0, 2]");
    if (cfg.crossover < 0.0 || cfg.crossover > 1.0) throw ValidationError("optimize: crossover CR must be in [0, 1]");
    if (cfg.generations < 0) throw ValidationError("optimize: generations must be non-negative");

    const int s = t.num_optimizable_cn();
    const int h = total_occurrences;

    FitnessCache local_cache(t, cfg.search, cfg.pexit_options);
    FitnessCache& cache = shared_cache != nullptr ? *shared_cache : local_cache;

    auto finish = [&](const Fitness& best, std::vector<GenerationStats> history,
                      std::uint64_t hits) -> OptimizeResult {
        if (!best.valid())
            throw ValidationError("optimize: no valid candidate found (h too small for this family?)");
        OccurrenceAssignment a = OccurrenceAssignment::induce(t, best.counts);
        pexit::Threshold th = pexit::tbp_threshold(t, a, cfg.search, cfg.pexit_options);
        return OptimizeResult{std::move(a), th, std::move(history), cache.computed(), hits};
    };

    std::uint64_t cache_hits = 0;

    if (s == 1) {
        // degenerate space: the single composition
        std::vector<int> only{h};
        auto fits = evaluate_generation(cache, {only}, cfg.threads, cache_hits);
        std::vector<GenerationStats> history{summarize(0, fits, cache, cache_hits)};
        return finish(fits[0], std::move(history), cache_hits);
    }

    SplitMix64 rng(cfg.seed);
    const int np = cfg.population;

    std::vector<std::vector<double>> pop(static_cast<std::size_t>(np),
                                         std::vector<double>(static_cast<std::size_t>(s)));
    for (auto& member : pop)
        for (auto& x : member) x = rng.next_double() * h;
    if (cfg.initial_candidate) {
        if (static_cast<int>(cfg.initial_candidate->size()) != s)
            throw ValidationError("optimize: initial candidate has wrong length");
        for (int d = 0; d < s; ++d)
            pop[0][static_cast<std::size_t>(d)] = static_cast<double>((*cfg.initial_candidate)[static_cast<std::size_t>(d)]);
    }

    auto keys_of = [&](const std::vector<std::vector<double>>& vecs) {
        std::vector<std::vector<int>> keys;
        keys.reserve(vecs.size());
        for (const auto& v : vecs) keys.push_back(repair(v, h));
        return keys;
    };

    std::vector<Fitness> fitness = evaluate_generation(cache, keys_of(pop), cfg.threads, cache_hits);
    if (std::none_of(fitness.begin(), fitness.end(), [](const Fitness& f) { return f.valid(); }))
        throw ValidationError("optimize: every generation-0 candidate is invalid (h too small for this family?)");

    std::vector<GenerationStats> history;
    history.push_back(summarize(0, fitness, cache, cache_hits));

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        // build all trials first (sequential rng), evaluate them as a batch
        std::vector<std::vector<double>> trials(static_cast<std::size_t>(np),
                                                std::vector<double>(static_cast<std::size_t>(s)));
        for (int i = 0; i < np; ++i) {
            int r1, r2, r3;
            do { r1 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(np))); } while (r1 == i);
            do { r2 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(np))); } while (r2 == i || r2 == r1);
            do { r3 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(np))); } while (r3 == i || r3 == r1 || r3 == r2);
            const int jrand = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(s)));
            for (int d = 0; d < s; ++d) {
                const double u = rng.next_double();
                const bool take = u < cfg.crossover || d == jrand;
                trials[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
                    take ? pop[static_cast<std::size_t>(r1)][static_cast<std::size_t>(d)] +
                               cfg.weight * (pop[static_cast<std::size_t>(r2)][static_cast<std::size_t>(d)] -
                                             pop[static_cast<std::size_t>(r3)][static_cast<std::size_t>(d)])
                         : pop[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
            }
        }
        std::vector<Fitness> trial_fitness = evaluate_generation(cache, keys_of(trials), cfg.threads, cache_hits);
        for (int i = 0; i < np; ++i) {
            if (trial_fitness[static_cast<std::size_t>(i)] <= fitness[static_cast<std::size_t>(i)]) {
                pop[static_cast<std::size_t>(i)] = trials[static_cast<std::size_t>(i)];
                fitness[static_cast<std::size_t>(i)] = trial_fitness[static_cast<std::size_t>(i)];
            }
        }
        history.push_back(summarize(gen, fitness, cache, cache_hits));
    }

    const Fitness best = *std::min_element(fitness.begin(), fitness.end(),
                                           [](const Fitness& a, const Fitness& b) { return a < b; });
    return finish(best, std::move(history), cache_hits);
}

} // namespace tbp::de
