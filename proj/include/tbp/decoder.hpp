#pragma once

#include <cstdint>
#include <vector>

#include "tbp/kern/kernels.hpp"
#include "tbp/lifting.hpp"

namespace tbp::sim {

struct DecodeOutcome {
    bool success = false; // zero syndrome reached
    int iterations = 0;
};

// Flooding-schedule sum-product decoder with the exact tanh rule. Holds its
// workspaces, so one instance per worker thread; decode() itself allocates
// nothing. Early exit on a zero syndrome.
class SumProductDecoder {
public:
    explicit SumProductDecoder(const SparseParityCheckMatrix& h, int max_iterations = 500,
                               kern::Backend backend = kern::active_backend());

    // llr.size() == cols; hard decisions are written for all bits, punctured
    // ones included
    DecodeOutcome decode(const std::vector<float>& llr, std::vector<std::uint8_t>& hard);

    int max_iterations() const { return max_iterations_; }

private:
    int rows_;
    int cols_;
    int max_iterations_;
    float message_clamp_ = 50.0f;
    const kern::Kernels& kernels_;

    // CSR over edges (row-major), plus a column view into the same edge ids
    std::vector<std::uint32_t> row_ptr_;
    std::vector<std::uint32_t> edge_col_;
    std::vector<std::uint32_t> col_ptr_;
    std::vector<std::uint32_t> col_edges_;

    std::vector<float> var_to_check_;
    std::vector<float> check_to_var_;
    std::vector<float> tanh_buf_;
    std::vector<float> prod_buf_;
    std::vector<float> totals_;
};

} // namespace tbp::sim
