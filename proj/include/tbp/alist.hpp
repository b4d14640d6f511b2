#pragma once

#include <string>

#include "tbp/lifting.hpp"

namespace tbp::sim {

// MacKay alist text: "N M", max column/row degree, per-column degrees,
// per-row degrees, then per-column 1-based row indices and per-row 1-based
// column indices, zero-padded to the maximum degree.
std::string to_alist(const SparseParityCheckMatrix& h);

// Provenance (source protomatrix, q, seed, puncturing) is not part of the
// format and is absent from the result.
SparseParityCheckMatrix from_alist(const std::string& text);

} // namespace tbp::sim
