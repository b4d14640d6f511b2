#include "tbp/protomatrix.hpp"

#include <algorithm>

#include <json.hpp>

#include "tbp/errors.hpp"

namespace tbp {

using ordered_json = nlohmann::ordered_json;

Protomatrix::Protomatrix(std::vector<std::vector<int>> entries, std::vector<int> punctured, int entry_cap)
    : entry_cap_(entry_cap), entries_(std::move(entries)), punctured_(std::move(punctured)) {
    rows_ = static_cast<int>(entries_.size());
    if (rows_ == 0) throw ValidationError("protomatrix: no rows");
    cols_ = static_cast<int>(entries_[0].size());
    if (cols_ == 0) throw ValidationError("protomatrix: no columns");
    if (entry_cap_ < 1) throw ValidationError("protomatrix: entry cap e_p must be positive");

    for (int i = 0; i < rows_; ++i) {
        if (static_cast<int>(entries_[static_cast<std::size_t>(i)].size()) != cols_)
            throw ValidationError("protomatrix: ragged matrix (row " + std::to_string(i) + ")");
        for (int j = 0; j < cols_; ++j) {
            const int b = (*this)(i, j);
            if (b < 0)
                throw ValidationError("protomatrix: negative entry at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
            if (b > entry_cap_)
                throw ValidationError("protomatrix: entry " + std::to_string(b) + " at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ") exceeds cap e_p=" + std::to_string(entry_cap_));
        }
    }

    if (cols_ <= rows_)
        throw ValidationError("protomatrix: need n > m for a positive design rate (m=" + std::to_string(rows_) +
                              ", n=" + std::to_string(cols_) + ")");

    std::sort(punctured_.begin(), punctured_.end());
    if (std::adjacent_find(punctured_.begin(), punctured_.end()) != punctured_.end())
        throw ValidationError("protomatrix: punctured indices must be distinct");
    for (int p : punctured_) {
        if (p < 0 || p >= cols_)
            throw ValidationError("protomatrix: punctured index " + std::to_string(p) + " out of range");
    }
    if (cols_ - static_cast<int>(punctured_.size()) <= 0)
        throw ValidationError("protomatrix: all columns punctured (n - n_p must be positive)");

    for (int i = 0; i < rows_; ++i) {
        if (row_degree(i) == 0) throw ValidationError("protomatrix: all-zero row " + std::to_string(i));
    }
    for (int j = 0; j < cols_; ++j) {
        if (col_degree(j) == 0) throw ValidationError("protomatrix: all-zero column " + std::to_string(j));
    }
}

bool Protomatrix::is_punctured(int col) const {
    return std::binary_search(punctured_.begin(), punctured_.end(), col);
}

int Protomatrix::row_degree(int i) const {
    int d = 0;
    for (int j = 0; j < cols_; ++j) d += (*this)(i, j);
    return d;
}

int Protomatrix::col_degree(int j) const {
    int d = 0;
    for (int i = 0; i < rows_; ++i) d += (*this)(i, j);
    return d;
}

int Protomatrix::max_entry() const {
    int m = 0;
    for (const auto& row : entries_)
        for (int b : row) m = std::max(m, b);
    return m;
}

Protomatrix Protomatrix::from_json_text(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("protomatrix document: ") + e.what());
    }
    try {
        const int m = doc.at("m").get<int>();
        const int n = doc.at("n").get<int>();
        const int e_p = doc.value("e_p", Protomatrix::kDefaultEntryCap);
        std::vector<int> punctured = doc.value("punctured", std::vector<int>{});
        auto matrix = doc.at("matrix").get<std::vector<std::vector<int>>>();
        if (static_cast<int>(matrix.size()) != m)
            throw ValidationError("protomatrix document: matrix has " + std::to_string(matrix.size()) +
                                  " rows, header says m=" + std::to_string(m));
        for (const auto& row : matrix) {
            if (static_cast<int>(row.size()) != n)
                throw ValidationError("protomatrix document: matrix row width differs from header n=" +
                                      std::to_string(n));
        }
        return Protomatrix(std::move(matrix), std::move(punctured), e_p);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("protomatrix document: ") + e.what());
    }
}

std::string Protomatrix::to_json_text() const {
    ordered_json doc;
    doc["m"] = rows_;
    doc["n"] = cols_;
    doc["e_p"] = entry_cap_;
    doc["punctured"] = punctured_;
    doc["matrix"] = entries_;
    return doc.dump(2) + "\n";
}

Rational design_rate(const Protomatrix& b) {
    return Rational(b.cols() - b.rows(), b.cols() - b.num_punctured());
}

} // namespace tbp
