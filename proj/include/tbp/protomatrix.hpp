#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbp/rational.hpp"

namespace tbp {

// Dense non-negative integer protomatrix B with a punctured-column set.
// Rows are check nodes, columns variable nodes and b(i,j) is the edge
// multiplicity between them. Immutable after construction; the constructor
// enforces every structural invariant and names the one it rejects.
class Protomatrix {
public:
    static constexpr int kDefaultEntryCap = 30;

    Protomatrix(std::vector<std::vector<int>> entries,
                std::vector<int> punctured = {},
                int entry_cap = kDefaultEntryCap);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int entry_cap() const { return entry_cap_; }

    int operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const std::vector<std::vector<int>>& entries() const { return entries_; }

    // sorted, unique column indices
    const std::vector<int>& punctured() const { return punctured_; }
    bool is_punctured(int col) const;
    int num_punctured() const { return static_cast<int>(punctured_.size()); }

    int row_degree(int i) const;
    int col_degree(int j) const;
    int max_entry() const;

    bool operator==(const Protomatrix& other) const {
        return entries_ == other.entries_ && punctured_ == other.punctured_ && entry_cap_ == other.entry_cap_;
    }

    // JSON document: {"m","n","e_p","punctured","matrix"}; "punctured" may be
    // omitted (defaults to none). Indices are 0-based.
    static Protomatrix from_json_text(const std::string& text);
    std::string to_json_text() const;

private:
    int rows_;
    int cols_;
    int entry_cap_;
    std::vector<std::vector<int>> entries_;
    std::vector<int> punctured_;
};

// Design rate (n - m) / (n - n_p), exact.
Rational design_rate(const Protomatrix& b);

} // namespace tbp
