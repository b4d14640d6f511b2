#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tbp/biguint.hpp"
#include "tbp/protomatrix.hpp"
#include "tbp/rational.hpp"

namespace tbp {

// Type-based protograph: rows are check node types, columns variable node
// types, t(i,j) the per-node edge count between the two types. The first
// num_fixed_cn rows / num_fixed_vn columns are the fixed types (they occur
// exactly once); the rest are optimizable and occur as often as an
// OccurrenceAssignment says. Pairing between optimizable CN and VN types is
// derived from the nonzero pattern of the optimizable block.
class TypeDescription {
public:
    TypeDescription(int num_fixed_cn, int num_fixed_vn,
                    std::vector<std::vector<int>> entries,
                    std::vector<int> punctured_vn_types = {});

    int num_cn_types() const { return num_cn_types_; }      // K
    int num_fixed_cn() const { return num_fixed_cn_; }      // k
    int num_vn_types() const { return num_vn_types_; }      // L
    int num_fixed_vn() const { return num_fixed_vn_; }      // l
    int num_optimizable_cn() const { return num_cn_types_ - num_fixed_cn_; } // S

    int operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    const std::vector<std::vector<int>>& entries() const { return entries_; }

    const std::vector<int>& punctured_vn_types() const { return punctured_vn_types_; }
    bool is_punctured_type(int vn_type) const;

    // (cn_type, vn_type) pairs with a nonzero entry in the optimizable block,
    // sorted lexicographically.
    const std::vector<std::pair<int, int>>& pairing() const { return pairing_; }

    // Connected component of the pairing graph each optimizable type belongs
    // to; all types in one component share their occurrence count.
    int cn_component(int cn_type) const;   // cn_type >= k
    int vn_component(int vn_type) const;   // vn_type >= l
    int num_components() const { return num_components_; }

    bool operator==(const TypeDescription& other) const {
        return num_fixed_cn_ == other.num_fixed_cn_ && num_fixed_vn_ == other.num_fixed_vn_ &&
               entries_ == other.entries_ && punctured_vn_types_ == other.punctured_vn_types_;
    }

    // JSON document: {"K","k","L","l","matrix","punctured_vn_types","pairing"};
    // the last two may be omitted. A supplied pairing must match the derived
    // one. Indices are 0-based.
    static TypeDescription from_json_text(const std::string& text);
    std::string to_json_text() const;

private:
    int num_cn_types_;
    int num_fixed_cn_;
    int num_vn_types_;
    int num_fixed_vn_;
    std::vector<std::vector<int>> entries_;
    std::vector<int> punctured_vn_types_;
    std::vector<std::pair<int, int>> pairing_;
    std::vector<int> cn_component_;
    std::vector<int> vn_component_;
    int num_components_ = 0;
};

// Occurrence vectors c (check node types) and v (variable node types).
// Fixed types occur once; optimizable occurrences are induced from the
// per-check-type counts through the pairing constraint c_i = v_j.
class OccurrenceAssignment {
public:
    // counts[s] is the occurrence count of optimizable CN type k+s.
    static OccurrenceAssignment induce(const TypeDescription& t, const std::vector<int>& counts);

    const std::vector<int>& cn_occurrences() const { return c_; }
    const std::vector<int>& vn_occurrences() const { return v_; }
    int total_optimizable() const { return h_; }

    // the free part of c (what the optimizer manipulates)
    std::vector<int> optimizable_counts(const TypeDescription& t) const;

    static OccurrenceAssignment from_json_text(const TypeDescription& t, const std::string& text);
    std::string to_json_text() const;

private:
    OccurrenceAssignment(std::vector<int> c, std::vector<int> v, int h)
        : c_(std::move(c)), v_(std::move(v)), h_(h) {}

    std::vector<int> c_;
    std::vector<int> v_;
    int h_;
};

// Design rate (l - k) / (l + h) of a type-based protograph, exact.
Rational tbp_design_rate(const TypeDescription& t, int total_optimizable);
Rational tbp_design_rate(const TypeDescription& t, const OccurrenceAssignment& a);

// Expansion of (T, a) into a protomatrix plus node -> type provenance.
struct ExpandedProtomatrix {
    Protomatrix matrix;
    std::vector<int> row_type; // per row, source CN type
    std::vector<int> col_type; // per column, source VN type
};

ExpandedProtomatrix expand_with_provenance(const TypeDescription& t, const OccurrenceAssignment& a,
                                           int entry_cap = Protomatrix::kDefaultEntryCap);
Protomatrix expand_type_description(const TypeDescription& t, const OccurrenceAssignment& a,
                                    int entry_cap = Protomatrix::kDefaultEntryCap);

// Binary expanded type description: every entry t(i,j) becomes t(i,j)
// disjoint random q~ x q~ permutation blocks, so each sub-block has row and
// column sums equal to the original entry. Deterministic in the seed.
TypeDescription lift_type_description(const TypeDescription& t, int q_tilde, std::uint64_t seed);

// Number of type-based protographs with S optimizable check node types and h
// total occurrences: C(S+h-1, h-1). The exhaustive enumerator counts weak
// compositions of h into S parts, C(S+h-1, S-1); see the enumerator docs.
BigUint search_space_size(int num_optimizable_types, int total_occurrences);

// (1 + e_p)^(m*n), the size of an unconstrained protomatrix search.
BigUint conventional_search_space_size(int entry_cap, int rows, int cols);

// The LDGM-concatenated low-rate family used throughout the tool's examples:
// one fixed check type over two fixed variable types plus six optimizable
// check types, each with a dedicated degree-one parity column. Rate 1/(2+h).
TypeDescription make_ldgm_family();

} // namespace tbp
