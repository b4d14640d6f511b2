#include "tbp/alist.hpp"

#include <algorithm>
#include <sstream>

#include "tbp/errors.hpp"

namespace tbp::sim {

std::string to_alist(const SparseParityCheckMatrix& h) {
    const int n = h.cols();
    const int m = h.rows();
    int max_col = 0, max_row = 0;
    for (int c = 0; c < n; ++c) max_col = std::max(max_col, h.col_degree(c));
    for (int r = 0; r < m; ++r) max_row = std::max(max_row, h.row_degree(r));

    std::ostringstream out;
    out << n << " " << m << "\n";
    out << max_col << " " << max_row << "\n";
    for (int c = 0; c < n; ++c) out << h.col_degree(c) << (c + 1 < n ? " " : "\n");
    for (int r = 0; r < m; ++r) out << h.row_degree(r) << (r + 1 < m ? " " : "\n");
    for (int c = 0; c < n; ++c) {
        const auto& rows = h.col_rows()[static_cast<std::size_t>(c)];
        for (int i = 0; i < max_col; ++i) {
            out << (i < static_cast<int>(rows.size()) ? rows[static_cast<std::size_t>(i)] + 1 : 0)
                << (i + 1 < max_col ? " " : "\n");
        }
    }
    for (int r = 0; r < m; ++r) {
        const auto& cols = h.row_cols()[static_cast<std::size_t>(r)];
        for (int i = 0; i < max_row; ++i) {
            out << (i < static_cast<int>(cols.size()) ? cols[static_cast<std::size_t>(i)] + 1 : 0)
                << (i + 1 < max_row ? " " : "\n");
        }
    }
    return out.str();
}

SparseParityCheckMatrix from_alist(const std::string& text) {
    std::istringstream in(text);
    auto next_int = [&](const char* what) {
        long long v;
        if (!(in >> v)) throw ParseError(std::string("alist: missing ") + what);
        return v;
    };

    const long long n = next_int("N");
    const long long m = next_int("M");
    if (n <= 0 || m <= 0) throw ParseError("alist: non-positive dimensions");
    const long long max_col = next_int("max column degree");
    const long long max_row = next_int("max row degree");

    std::vector<int> col_deg(static_cast<std::size_t>(n));
    for (auto& d : col_deg) {
        d = static_cast<int>(next_int("column degree"));
        if (d < 0 || d > max_col) throw ParseError("alist: column degree out of range");
    }
    std::vector<int> row_deg(static_cast<std::size_t>(m));
    for (auto& d : row_deg) {
        d = static_cast<int>(next_int("row degree"));
        if (d < 0 || d > max_row) throw ParseError("alist: row degree out of range");
    }

    std::vector<std::vector<int>> col_rows(static_cast<std::size_t>(n));
    for (long long c = 0; c < n; ++c) {
        for (long long i = 0; i < max_col; ++i) {
            const long long v = next_int("column entry");
            if (v < 0 || v > m) throw ParseError("alist: row index out of range in column list");
            if (v != 0) col_rows[static_cast<std::size_t>(c)].push_back(static_cast<int>(v - 1));
        }
        if (static_cast<int>(col_rows[static_cast<std::size_t>(c)].size()) != col_deg[static_cast<std::size_t>(c)])
            throw ParseError("alist: column " + std::to_string(c) + " entry count does not match its degree");
    }

    std::vector<std::vector<int>> row_cols(static_cast<std::size_t>(m));
    for (long long r = 0; r < m; ++r) {
        for (long long i = 0; i < max_row; ++i) {
            const long long v = next_int("row entry");
            if (v < 0 || v > n) throw ParseError("alist: column index out of range in row list");
            if (v != 0) row_cols[static_cast<std::size_t>(r)].push_back(static_cast<int>(v - 1));
        }
        if (static_cast<int>(row_cols[static_cast<std::size_t>(r)].size()) != row_deg[static_cast<std::size_t>(r)])
            throw ParseError("alist: row " + std::to_string(r) + " entry count does not match its degree");
    }

    SparseParityCheckMatrix h(static_cast<int>(m), static_cast<int>(n), std::move(row_cols));

    // cross-check the two adjacency views
    for (long long c = 0; c < n; ++c) {
        auto expect = col_rows[static_cast<std::size_t>(c)];
        std::sort(expect.begin(), expect.end());
        if (expect != h.col_rows()[static_cast<std::size_t>(c)])
            throw ParseError("alist: row and column lists disagree for column " + std::to_string(c));
    }
    return h;
}

} // namespace tbp::sim
