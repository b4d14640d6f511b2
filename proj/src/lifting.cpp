#include "tbp/lifting.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tbp/errors.hpp"
#include "tbp/rng.hpp"

namespace tbp::sim {

SparseParityCheckMatrix::SparseParityCheckMatrix(int rows, int cols, std::vector<std::vector<int>> row_cols,
                                                 std::vector<int> punctured_bits,
                                                 std::optional<LiftProvenance> provenance)
    : rows_(rows), cols_(cols), row_cols_(std::move(row_cols)), punctured_bits_(std::move(punctured_bits)),
      provenance_(std::move(provenance)) {
    if (rows_ <= 0 || cols_ <= 0) throw ValidationError("pcm: dimensions must be positive");
    if (static_cast<int>(row_cols_.size()) != rows_) throw ValidationError("pcm: row list count mismatch");

    col_rows_.assign(static_cast<std::size_t>(cols_), {});
    for (int r = 0; r < rows_; ++r) {
        auto& cols_of_row = row_cols_[static_cast<std::size_t>(r)];
        std::sort(cols_of_row.begin(), cols_of_row.end());
        if (std::adjacent_find(cols_of_row.begin(), cols_of_row.end()) != cols_of_row.end())
            throw ValidationError("pcm: duplicate edge in row " + std::to_string(r));
        for (int c : cols_of_row) {
            if (c < 0 || c >= cols_) throw ValidationError("pcm: column index out of range in row " + std::to_string(r));
            col_rows_[static_cast<std::size_t>(c)].push_back(r);
            ++num_edges_;
        }
    }

    std::sort(punctured_bits_.begin(), punctured_bits_.end());
    if (std::adjacent_find(punctured_bits_.begin(), punctured_bits_.end()) != punctured_bits_.end())
        throw ValidationError("pcm: punctured bit positions must be distinct");
    for (int p : punctured_bits_) {
        if (p < 0 || p >= cols_) throw ValidationError("pcm: punctured bit position out of range");
    }
}

bool SparseParityCheckMatrix::has_edge(int r, int c) const {
    const auto& row = row_cols_[static_cast<std::size_t>(r)];
    return std::binary_search(row.begin(), row.end(), c);
}

Rational SparseParityCheckMatrix::rate() const {
    return Rational(cols_ - rows_, cols_ - static_cast<int>(punctured_bits_.size()));
}

namespace {

// b pairwise-disjoint permutations of [0, q): rejection sampling with a
// cyclic-shift fallback
std::vector<std::vector<int>> disjoint_permutations(int q, int b, SplitMix64& rng) {
    std::vector<std::vector<int>> perms;
    std::vector<std::vector<bool>> used(static_cast<std::size_t>(q), std::vector<bool>(static_cast<std::size_t>(q), false));
    std::vector<int> candidate(static_cast<std::size_t>(q));
    std::iota(candidate.begin(), candidate.end(), 0);

    for (int attempt = 0; static_cast<int>(perms.size()) < b && attempt < 400; ++attempt) {
        rng.shuffle(candidate);
        bool clash = false;
        for (int r = 0; r < q && !clash; ++r)
            clash = used[static_cast<std::size_t>(r)][static_cast<std::size_t>(candidate[static_cast<std::size_t>(r)])];
        if (clash) continue;
        for (int r = 0; r < q; ++r)
            used[static_cast<std::size_t>(r)][static_cast<std::size_t>(candidate[static_cast<std::size_t>(r)])] = true;
        perms.push_back(candidate);
    }
    if (static_cast<int>(perms.size()) < b) {
        perms.clear();
        rng.shuffle(candidate);
        std::vector<int> shifts(static_cast<std::size_t>(q));
        std::iota(shifts.begin(), shifts.end(), 0);
        rng.shuffle(shifts);
        for (int s = 0; s < b; ++s) {
            std::vector<int> perm(static_cast<std::size_t>(q));
            for (int r = 0; r < q; ++r)
                perm[static_cast<std::size_t>(r)] =
                    (candidate[static_cast<std::size_t>(r)] + shifts[static_cast<std::size_t>(s)]) % q;
            perms.push_back(std::move(perm));
        }
    }
    return perms;
}

} // namespace

SparseParityCheckMatrix lift_protomatrix(const Protomatrix& b, int q, std::uint64_t seed) {
    if (q < 1) throw ValidationError("lift: q must be positive");
    if (q < b.max_entry())
        throw ValidationError("lift: q=" + std::to_string(q) + " is below the largest protomatrix entry " +
                              std::to_string(b.max_entry()) + " (parallel edges cannot be separated)");

    const int m = b.rows();
    const int n = b.cols();
    std::vector<std::vector<int>> row_cols(static_cast<std::size_t>(m) * static_cast<std::size_t>(q));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const int mult = b(i, j);
            if (mult == 0) continue;
            SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
                                              static_cast<std::uint64_t>(j)));
            const auto perms = disjoint_permutations(q, mult, rng);
            for (const auto& perm : perms) {
                for (int r = 0; r < q; ++r)
                    row_cols[static_cast<std::size_t>(i * q + r)].push_back(j * q + perm[static_cast<std::size_t>(r)]);
            }
        }
    }

    std::vector<int> punctured;
    for (int j : b.punctured())
        for (int s = 0; s < q; ++s) punctured.push_back(j * q + s);

    return SparseParityCheckMatrix(m * q, n * q, std::move(row_cols), std::move(punctured),
                                   LiftProvenance{b, q, seed});
}

namespace {

// rows sharing >= 2 columns, collected from scratch
std::vector<std::pair<int, int>> offending_pairs(const std::vector<std::vector<int>>& row_cols) {
    std::map<std::pair<int, int>, int> shared; // (r1, r2) -> shared column count
    const int rows = static_cast<int>(row_cols.size());
    std::vector<std::vector<int>> col_rows;
    int cols = 0;
    for (const auto& rc : row_cols)
        for (int c : rc) cols = std::max(cols, c + 1);
    col_rows.assign(static_cast<std::size_t>(cols), {});
    for (int r = 0; r < rows; ++r)
        for (int c : row_cols[static_cast<std::size_t>(r)]) col_rows[static_cast<std::size_t>(c)].push_back(r);
    for (const auto& rows_of_col : col_rows) {
        for (std::size_t a = 0; a < rows_of_col.size(); ++a)
            for (std::size_t b = a + 1; b < rows_of_col.size(); ++b)
                shared[{rows_of_col[a], rows_of_col[b]}] += 1;
    }
    std::vector<std::pair<int, int>> out;
    for (const auto& [pair, count] : shared)
        if (count >= 2) out.push_back(pair);
    return out;
}

} // namespace

std::uint64_t count_4cycle_pairs(const SparseParityCheckMatrix& h) {
    return offending_pairs(h.row_cols()).size();
}

RepairResult remove_4cycles(const SparseParityCheckMatrix& h, std::uint64_t seed, int max_passes) {
    if (!h.provenance())
        throw ValidationError("remove_4cycles: matrix has no lift provenance (block structure unknown)");
    const int q = h.provenance()->lift_factor;

    std::vector<std::vector<int>> row_cols = h.row_cols();
    std::vector<std::vector<int>> col_rows(static_cast<std::size_t>(h.cols()));
    for (int r = 0; r < h.rows(); ++r)
        for (int c : row_cols[static_cast<std::size_t>(r)]) col_rows[static_cast<std::size_t>(c)].push_back(r);
    for (auto& rows_of_col : col_rows) std::sort(rows_of_col.begin(), rows_of_col.end());

    SplitMix64 rng(mix_seed(seed, 0x4c5e));

    auto row_has = [&](int r, int c) {
        const auto& rc = row_cols[static_cast<std::size_t>(r)];
        return std::binary_search(rc.begin(), rc.end(), c);
    };
    auto replace_edge = [&](int r, int c_old, int c_new) {
        auto& rc = row_cols[static_cast<std::size_t>(r)];
        rc.erase(std::lower_bound(rc.begin(), rc.end(), c_old));
        rc.insert(std::lower_bound(rc.begin(), rc.end(), c_new), c_new);
        auto& old_rows = col_rows[static_cast<std::size_t>(c_old)];
        old_rows.erase(std::lower_bound(old_rows.begin(), old_rows.end(), r));
        auto& new_rows = col_rows[static_cast<std::size_t>(c_new)];
        new_rows.insert(std::lower_bound(new_rows.begin(), new_rows.end(), r), r);
    };
    // shared columns beyond one, summed over all rows meeting r; zero for the
    // whole matrix is exactly the row-column constraint
    auto row_excess = [&](int r) {
        std::vector<int> met;
        for (int c : row_cols[static_cast<std::size_t>(r)])
            for (int rr : col_rows[static_cast<std::size_t>(c)])
                if (rr != r) met.push_back(rr);
        std::sort(met.begin(), met.end());
        int excess = 0;
        for (std::size_t i = 0; i < met.size();) {
            std::size_t j = i;
            while (j < met.size() && met[j] == met[i]) ++j;
            excess += static_cast<int>(j - i) - 1;
            i = j;
        }
        return excess;
    };

    int swaps = 0;
    int pass = 0;
    for (;;) {
        const auto offending = offending_pairs(row_cols);
        if (offending.empty()) break;
        ++pass;
        if (pass > max_passes)
            throw ValidationError("remove_4cycles: " + std::to_string(offending.size()) +
                                  " row pairs still share >= 2 columns after " + std::to_string(max_passes) +
                                  " passes (try a larger q)");

        for (const auto& pair : offending) {
            // shared columns may have been fixed by an earlier swap this pass
            std::vector<int> shared;
            {
                const auto& a = row_cols[static_cast<std::size_t>(pair.first)];
                const auto& b = row_cols[static_cast<std::size_t>(pair.second)];
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
            }
            if (shared.size() < 2) continue;

            bool fixed = false;
            for (int tries = 0; tries < 40 && !fixed; ++tries) {
                // relocate one shared edge (rm, c): swap permutation targets
                // with a partner edge (rp, cp) of the same q x q block
                const int rm = rng.next_below(2) == 0 ? pair.second : pair.first;
                const int c = shared[static_cast<std::size_t>(rng.next_below(shared.size()))];
                const int block_row = (rm / q) * q;
                const int block_col_lo = (c / q) * q;
                const int rp = block_row + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
                if (rp == rm) continue;
                std::vector<int> partners;
                for (int cc : row_cols[static_cast<std::size_t>(rp)])
                    if (cc >= block_col_lo && cc < block_col_lo + q) partners.push_back(cc);
                if (partners.empty()) continue;
                const int cp = partners[static_cast<std::size_t>(rng.next_below(partners.size()))];
                if (cp == c) continue;
                if (row_has(rm, cp) || row_has(rp, c)) continue; // would stack edges

                const int before = row_excess(rm) + row_excess(rp);
                replace_edge(rm, c, cp);
                replace_edge(rp, cp, c);
                const int after = row_excess(rm) + row_excess(rp);
                if (after > before) {
                    replace_edge(rm, cp, c); // revert
                    replace_edge(rp, c, cp);
                } else {
                    ++swaps;
                    fixed = true;
                }
            }
        }
    }

    SparseParityCheckMatrix repaired(h.rows(), h.cols(), std::move(row_cols), h.punctured_bits(),
                                     h.provenance());
    return RepairResult{std::move(repaired), swaps, pass};
}

} // namespace tbp::sim
