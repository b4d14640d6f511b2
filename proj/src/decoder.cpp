#include "tbp/decoder.hpp"

#include <algorithm>

#include "tbp/errors.hpp"

namespace tbp::sim {

SumProductDecoder::SumProductDecoder(const SparseParityCheckMatrix& h, int max_iterations,
                                     kern::Backend backend)
    : rows_(h.rows()), cols_(h.cols()), max_iterations_(max_iterations),
      kernels_(kern::kernels(backend)) {
    if (max_iterations_ < 1) throw ValidationError("decoder: need at least one iteration");

    const std::size_t ne = static_cast<std::size_t>(h.num_edges());
    row_ptr_.resize(static_cast<std::size_t>(rows_) + 1);
    edge_col_.resize(ne);
    std::size_t e = 0;
    for (int r = 0; r < rows_; ++r) {
        row_ptr_[static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(e);
        for (int c : h.row_cols()[static_cast<std::size_t>(r)]) edge_col_[e++] = static_cast<std::uint32_t>(c);
    }
    row_ptr_[static_cast<std::size_t>(rows_)] = static_cast<std::uint32_t>(e);

    // column view: edge ids grouped by column
    col_ptr_.assign(static_cast<std::size_t>(cols_) + 1, 0);
    for (std::size_t i = 0; i < ne; ++i) col_ptr_[edge_col_[i] + 1] += 1;
    for (int c = 0; c < cols_; ++c) col_ptr_[static_cast<std::size_t>(c) + 1] += col_ptr_[static_cast<std::size_t>(c)];
    col_edges_.resize(ne);
    {
        std::vector<std::uint32_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
        for (std::size_t i = 0; i < ne; ++i) col_edges_[cursor[edge_col_[i]]++] = static_cast<std::uint32_t>(i);
    }

    var_to_check_.resize(ne);
    check_to_var_.assign(ne, 0.0f);
    tanh_buf_.resize(ne);
    prod_buf_.resize(ne);
    totals_.resize(static_cast<std::size_t>(cols_));
}

DecodeOutcome SumProductDecoder::decode(const std::vector<float>& llr, std::vector<std::uint8_t>& hard) {
    if (static_cast<int>(llr.size()) != cols_) throw ValidationError("decoder: LLR length != N");
    hard.assign(static_cast<std::size_t>(cols_), 0);
    std::fill(check_to_var_.begin(), check_to_var_.end(), 0.0f);

    const std::size_t ne = edge_col_.size();
    for (int iter = 1; iter <= max_iterations_; ++iter) {
        // variable pass: total = channel + sum of incoming, messages exclude own edge
        for (int c = 0; c < cols_; ++c) {
            float total = llr[static_cast<std::size_t>(c)];
            for (std::uint32_t s = col_ptr_[static_cast<std::size_t>(c)]; s < col_ptr_[static_cast<std::size_t>(c) + 1]; ++s)
                total += check_to_var_[col_edges_[s]];
            totals_[static_cast<std::size_t>(c)] = total;
        }
        for (std::size_t e = 0; e < ne; ++e)
            var_to_check_[e] = totals_[edge_col_[e]] - check_to_var_[e];

        // check pass: tanh rule via exclusive forward/backward products
        kernels_.tanh_half(var_to_check_.data(), tanh_buf_.data(), ne);
        for (int r = 0; r < rows_; ++r) {
            const std::uint32_t lo = row_ptr_[static_cast<std::size_t>(r)];
            const std::uint32_t hi = row_ptr_[static_cast<std::size_t>(r) + 1];
            const std::uint32_t deg = hi - lo;
            if (deg == 1) {
                prod_buf_[lo] = 1.0f; // lone edge: empty product
                continue;
            }
            float forward = 1.0f;
            for (std::uint32_t e = lo; e < hi; ++e) {
                prod_buf_[e] = forward;
                forward *= tanh_buf_[e];
            }
            float backward = 1.0f;
            for (std::uint32_t e = hi; e-- > lo;) {
                prod_buf_[e] *= backward;
                backward *= tanh_buf_[e];
            }
        }
        kernels_.atanh2(prod_buf_.data(), check_to_var_.data(), ne, message_clamp_);

        // decisions and syndrome on the updated messages
        for (int c = 0; c < cols_; ++c) {
            float total = llr[static_cast<std::size_t>(c)];
            for (std::uint32_t s = col_ptr_[static_cast<std::size_t>(c)]; s < col_ptr_[static_cast<std::size_t>(c) + 1]; ++s)
                total += check_to_var_[col_edges_[s]];
            hard[static_cast<std::size_t>(c)] = total < 0.0f ? 1 : 0;
        }
        bool syndrome_zero = true;
        for (int r = 0; r < rows_ && syndrome_zero; ++r) {
            unsigned parity = 0;
            for (std::uint32_t e = row_ptr_[static_cast<std::size_t>(r)]; e < row_ptr_[static_cast<std::size_t>(r) + 1]; ++e)
                parity ^= hard[edge_col_[e]];
            syndrome_zero = parity == 0;
        }
        if (syndrome_zero) return DecodeOutcome{true, iter};
    }
    return DecodeOutcome{false, max_iterations_};
}

} // namespace tbp::sim
