#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbp/protomatrix.hpp"

namespace tbp::sim {

struct LiftProvenance {
    Protomatrix source;
    int lift_factor;
    std::uint64_t seed;
};

// Lifted binary parity check matrix in adjacency form. Row and column
// neighbour lists are kept sorted.
class SparseParityCheckMatrix {
public:
    SparseParityCheckMatrix(int rows, int cols, std::vector<std::vector<int>> row_cols,
                            std::vector<int> punctured_bits = {},
                            std::optional<LiftProvenance> provenance = std::nullopt);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::uint64_t num_edges() const { return num_edges_; }

    const std::vector<std::vector<int>>& row_cols() const { return row_cols_; }
    const std::vector<std::vector<int>>& col_rows() const { return col_rows_; }
    const std::vector<int>& punctured_bits() const { return punctured_bits_; }

    int row_degree(int r) const { return static_cast<int>(row_cols_[static_cast<std::size_t>(r)].size()); }
    int col_degree(int c) const { return static_cast<int>(col_rows_[static_cast<std::size_t>(c)].size()); }

    const std::optional<LiftProvenance>& provenance() const { return provenance_; }

    bool has_edge(int r, int c) const;

    // exact design rate (n - m) / (n - n_p) on the lifted dimensions
    Rational rate() const;

private:
    int rows_;
    int cols_;
    std::uint64_t num_edges_ = 0;
    std::vector<std::vector<int>> row_cols_;
    std::vector<std::vector<int>> col_rows_;
    std::vector<int> punctured_bits_;
    std::optional<LiftProvenance> provenance_;
};

// Random lift: every unit of b(i,j) becomes its own q x q permutation block;
// parallel edge types of one protograph edge use pairwise disjoint
// permutations so the binary lift never stacks two edges on one cell.
// Deterministic in the seed. Requires q >= max entry of b.
SparseParityCheckMatrix lift_protomatrix(const Protomatrix& b, int q, std::uint64_t seed);

struct RepairResult {
    SparseParityCheckMatrix matrix;
    int swaps = 0;
    int passes = 0;
};

// Iterative edge swaps inside the offending permutation blocks until no two
// rows share more than one column (girth >= 6). Degrees and the protograph
// block structure are preserved. Throws if max_passes is exhausted, carrying
// the residual 4-cycle count.
RepairResult remove_4cycles(const SparseParityCheckMatrix& h, std::uint64_t seed, int max_passes = 60);

// Number of row pairs sharing >= 2 columns (0 means the row-column
// constraint holds).
std::uint64_t count_4cycle_pairs(const SparseParityCheckMatrix& h);

} // namespace tbp::sim
