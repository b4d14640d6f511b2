#include "tbp/type_description.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "tbp/errors.hpp"
#include "tbp/rng.hpp"

namespace tbp {

using ordered_json = nlohmann::ordered_json;

namespace {

// union-find over k+l-offset optimizable type indices
struct UnionFind {
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
    std::vector<int> parent;
};

} // namespace

TypeDescription::TypeDescription(int num_fixed_cn, int num_fixed_vn,
                                 std::vector<std::vector<int>> entries,
                                 std::vector<int> punctured_vn_types)
    : num_fixed_cn_(num_fixed_cn), num_fixed_vn_(num_fixed_vn),
      entries_(std::move(entries)), punctured_vn_types_(std::move(punctured_vn_types)) {
    num_cn_types_ = static_cast<int>(entries_.size());
    if (num_cn_types_ == 0) throw ValidationError("type description: no check node types");
    num_vn_types_ = static_cast<int>(entries_[0].size());
    if (num_vn_types_ == 0) throw ValidationError("type description: no variable node types");

    if (num_fixed_cn_ < 0 || num_fixed_cn_ > num_cn_types_)
        throw ValidationError("type description: fixed CN count k out of range");
    if (num_fixed_vn_ < 0 || num_fixed_vn_ > num_vn_types_)
        throw ValidationError("type description: fixed VN count l out of range");

    for (int i = 0; i < num_cn_types_; ++i) {
        if (static_cast<int>(entries_[static_cast<std::size_t>(i)].size()) != num_vn_types_)
            throw ValidationError("type description: ragged matrix (row " + std::to_string(i) + ")");
        for (int j = 0; j < num_vn_types_; ++j) {
            if ((*this)(i, j) < 0)
                throw ValidationError("type description: negative entry at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
    }

    for (int i = 0; i < num_cn_types_; ++i) {
        int degree = 0;
        for (int j = 0; j < num_vn_types_; ++j) degree += (*this)(i, j);
        if (degree == 0)
            throw ValidationError("type description: check node type " + std::to_string(i) + " has degree 0");
    }
    for (int j = 0; j < num_vn_types_; ++j) {
        int degree = 0;
        for (int i = 0; i < num_cn_types_; ++i) degree += (*this)(i, j);
        if (degree == 0)
            throw ValidationError("type description: variable node type " + std::to_string(j) + " has degree 0");
    }

    std::sort(punctured_vn_types_.begin(), punctured_vn_types_.end());
    if (std::adjacent_find(punctured_vn_types_.begin(), punctured_vn_types_.end()) != punctured_vn_types_.end())
        throw ValidationError("type description: punctured VN types must be distinct");
    for (int p : punctured_vn_types_) {
        if (p < 0 || p >= num_vn_types_)
            throw ValidationError("type description: punctured VN type " + std::to_string(p) + " out of range");
    }

    // derive pairing and its connected components
    const int s_cn = num_optimizable_cn();
    const int s_vn = num_vn_types_ - num_fixed_vn_;
    UnionFind uf(s_cn + s_vn);
    for (int i = num_fixed_cn_; i < num_cn_types_; ++i) {
        for (int j = num_fixed_vn_; j < num_vn_types_; ++j) {
            if ((*this)(i, j) > 0) {
                pairing_.emplace_back(i, j);
                uf.unite(i - num_fixed_cn_, s_cn + (j - num_fixed_vn_));
            }
        }
    }

    // every optimizable VN type needs an optimizable CN partner, otherwise its
    // occurrence count cannot be induced from c
    for (int j = num_fixed_vn_; j < num_vn_types_; ++j) {
        bool paired = false;
        for (int i = num_fixed_cn_; i < num_cn_types_ && !paired; ++i) paired = (*this)(i, j) > 0;
        if (!paired)
            throw ValidationError("type description: optimizable VN type " + std::to_string(j) +
                                  " has no optimizable CN partner, so its occurrence count is undefined");
    }

    cn_component_.resize(static_cast<std::size_t>(s_cn));
    vn_component_.resize(static_cast<std::size_t>(s_vn));
    std::vector<int> root_to_comp(static_cast<std::size_t>(s_cn + s_vn), -1);
    for (int x = 0; x < s_cn + s_vn; ++x) {
        const int root = uf.find(x);
        if (root_to_comp[static_cast<std::size_t>(root)] < 0)
            root_to_comp[static_cast<std::size_t>(root)] = num_components_++;
        const int comp = root_to_comp[static_cast<std::size_t>(root)];
        if (x < s_cn)
            cn_component_[static_cast<std::size_t>(x)] = comp;
        else
            vn_component_[static_cast<std::size_t>(x - s_cn)] = comp;
    }
}

bool TypeDescription::is_punctured_type(int vn_type) const {
    return std::binary_search(punctured_vn_types_.begin(), punctured_vn_types_.end(), vn_type);
}

int TypeDescription::cn_component(int cn_type) const {
    return cn_component_[static_cast<std::size_t>(cn_type - num_fixed_cn_)];
}

int TypeDescription::vn_component(int vn_type) const {
    return vn_component_[static_cast<std::size_t>(vn_type - num_fixed_vn_)];
}

TypeDescription TypeDescription::from_json_text(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("type description document: ") + e.what());
    }
    try {
        const int K = doc.at("K").get<int>();
        const int k = doc.at("k").get<int>();
        const int L = doc.at("L").get<int>();
        const int l = doc.at("l").get<int>();
        auto matrix = doc.at("matrix").get<std::vector<std::vector<int>>>();
        std::vector<int> punctured = doc.value("punctured_vn_types", std::vector<int>{});
        if (static_cast<int>(matrix.size()) != K)
            throw ValidationError("type description document: matrix has " + std::to_string(matrix.size()) +
                                  " rows, header says K=" + std::to_string(K));
        for (const auto& row : matrix) {
            if (static_cast<int>(row.size()) != L)
                throw ValidationError("type description document: matrix row width differs from header L=" +
                                      std::to_string(L));
        }
        TypeDescription result(k, l, std::move(matrix), std::move(punctured));
        if (doc.contains("pairing")) {
            auto given = doc.at("pairing").get<std::vector<std::pair<int, int>>>();
            std::sort(given.begin(), given.end());
            if (given != result.pairing())
                throw ValidationError("type description document: pairing does not match the nonzero "
                                      "pattern of the optimizable block");
        }
        return result;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("type description document: ") + e.what());
    }
}

std::string TypeDescription::to_json_text() const {
    ordered_json doc;
    doc["K"] = num_cn_types_;
    doc["k"] = num_fixed_cn_;
    doc["L"] = num_vn_types_;
    doc["l"] = num_fixed_vn_;
    doc["matrix"] = entries_;
    doc["punctured_vn_types"] = punctured_vn_types_;
    doc["pairing"] = pairing_;
    return doc.dump(2) + "\n";
}

OccurrenceAssignment OccurrenceAssignment::induce(const TypeDescription& t, const std::vector<int>& counts) {
    const int k = t.num_fixed_cn();
    const int l = t.num_fixed_vn();
    const int K = t.num_cn_types();
    const int L = t.num_vn_types();
    if (static_cast<int>(counts.size()) != t.num_optimizable_cn())
        throw ValidationError("occurrence assignment: expected " + std::to_string(t.num_optimizable_cn()) +
                              " counts, got " + std::to_string(counts.size()));
    for (int c : counts) {
        if (c < 0) throw ValidationError("occurrence assignment: negative occurrence count");
    }

    std::vector<int> c(static_cast<std::size_t>(K), 1);
    for (int i = k; i < K; ++i) c[static_cast<std::size_t>(i)] = counts[static_cast<std::size_t>(i - k)];

    // all CN types of a pairing component must agree; the component count
    // becomes v_j for its VN types
    std::vector<int> comp_count(static_cast<std::size_t>(t.num_components()), -1);
    for (int i = k; i < K; ++i) {
        const int comp = t.cn_component(i);
        int& slot = comp_count[static_cast<std::size_t>(comp)];
        if (slot < 0) {
            slot = c[static_cast<std::size_t>(i)];
        } else if (slot != c[static_cast<std::size_t>(i)]) {
            throw ValidationError("occurrence assignment: paired check node types must occur equally often "
                                  "(c_i = v_j violated in component " + std::to_string(comp) + ")");
        }
    }

    std::vector<int> v(static_cast<std::size_t>(L), 1);
    int vn_total = 0;
    for (int j = l; j < L; ++j) {
        const int comp = t.vn_component(j);
        const int count = comp_count[static_cast<std::size_t>(comp)];
        v[static_cast<std::size_t>(j)] = count < 0 ? 0 : count;
        vn_total += v[static_cast<std::size_t>(j)];
    }

    const int h = std::accumulate(counts.begin(), counts.end(), 0);
    if (vn_total != h)
        throw ValidationError("occurrence assignment: optimizable VN occurrences (" + std::to_string(vn_total) +
                              ") do not equal h (" + std::to_string(h) + ")");

    // fixed nodes must keep degree >= 1 once occurrences are applied
    for (int i = 0; i < k; ++i) {
        long long degree = 0;
        for (int j = 0; j < L; ++j)
            degree += static_cast<long long>(t(i, j)) * (j < l ? 1 : v[static_cast<std::size_t>(j)]);
        if (degree == 0)
            throw ValidationError("occurrence assignment: fixed check node type " + std::to_string(i) +
                                  " would have degree 0");
    }
    for (int j = 0; j < l; ++j) {
        long long degree = 0;
        for (int i = 0; i < K; ++i)
            degree += static_cast<long long>(t(i, j)) * (i < k ? 1 : c[static_cast<std::size_t>(i)]);
        if (degree == 0)
            throw ValidationError("occurrence assignment: fixed variable node type " + std::to_string(j) +
                                  " would have degree 0");
    }

    return OccurrenceAssignment(std::move(c), std::move(v), h);
}

std::vector<int> OccurrenceAssignment::optimizable_counts(const TypeDescription& t) const {
    return std::vector<int>(c_.begin() + t.num_fixed_cn(), c_.end());
}

OccurrenceAssignment OccurrenceAssignment::from_json_text(const TypeDescription& t, const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("assignment document: ") + e.what());
    }
    try {
        auto c = doc.at("c").get<std::vector<int>>();
        if (static_cast<int>(c.size()) != t.num_cn_types())
            throw ValidationError("assignment document: c has wrong length");
        for (int i = 0; i < t.num_fixed_cn(); ++i) {
            if (c[static_cast<std::size_t>(i)] != 1)
                throw ValidationError("assignment document: fixed check node types must occur once");
        }
        std::vector<int> counts(c.begin() + t.num_fixed_cn(), c.end());
        OccurrenceAssignment a = induce(t, counts);
        if (doc.contains("v") && doc.at("v").get<std::vector<int>>() != a.vn_occurrences())
            throw ValidationError("assignment document: v does not match the induced occurrences");
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("assignment document: ") + e.what());
    }
}

std::string OccurrenceAssignment::to_json_text() const {
    ordered_json doc;
    doc["c"] = c_;
    doc["v"] = v_;
    doc["h"] = h_;
    return doc.dump(2) + "\n";
}

Rational tbp_design_rate(const TypeDescription& t, int total_optimizable) {
    const int k = t.num_fixed_cn();
    const int l = t.num_fixed_vn();
    if (l <= k)
        throw ValidationError("tbp design rate: need l > k for a positive rate (k=" + std::to_string(k) +
                              ", l=" + std::to_string(l) + ")");
    return Rational(l - k, l + total_optimizable);
}

Rational tbp_design_rate(const TypeDescription& t, const OccurrenceAssignment& a) {
    return tbp_design_rate(t, a.total_optimizable());
}

ExpandedProtomatrix expand_with_provenance(const TypeDescription& t, const OccurrenceAssignment& a,
                                           int entry_cap) {
    const int k = t.num_fixed_cn();
    const int l = t.num_fixed_vn();
    const int K = t.num_cn_types();
    const int L = t.num_vn_types();
    const auto& c = a.cn_occurrences();
    const auto& v = a.vn_occurrences();

    std::vector<int> row_type;
    std::vector<int> col_type;
    // occurrence index within its type, parallel to row_type / col_type
    std::vector<int> row_occ;
    std::vector<int> col_occ;
    for (int i = 0; i < K; ++i) {
        const int reps = i < k ? 1 : c[static_cast<std::size_t>(i)];
        for (int r = 0; r < reps; ++r) {
            row_type.push_back(i);
            row_occ.push_back(r);
        }
    }
    for (int j = 0; j < L; ++j) {
        const int reps = j < l ? 1 : v[static_cast<std::size_t>(j)];
        for (int r = 0; r < reps; ++r) {
            col_type.push_back(j);
            col_occ.push_back(r);
        }
    }

    const int m = static_cast<int>(row_type.size());
    const int n = static_cast<int>(col_type.size());
    std::vector<std::vector<int>> entries(static_cast<std::size_t>(m),
                                          std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int r = 0; r < m; ++r) {
        const int i = row_type[static_cast<std::size_t>(r)];
        for (int s = 0; s < n; ++s) {
            const int j = col_type[static_cast<std::size_t>(s)];
            const int tij = t(i, j);
            if (tij == 0) continue;
            if (i < k || j < l) {
                // a fixed endpoint connects to every occurrence of the other side
                entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = tij;
            } else {
                // optimizable-optimizable: occurrences matched index-to-index
                if (row_occ[static_cast<std::size_t>(r)] == col_occ[static_cast<std::size_t>(s)])
                    entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = tij;
            }
        }
    }

    std::vector<int> punctured;
    for (int s = 0; s < n; ++s) {
        if (t.is_punctured_type(col_type[static_cast<std::size_t>(s)])) punctured.push_back(s);
    }

    int cap = entry_cap;
    for (const auto& row : entries)
        for (int b : row) cap = std::max(cap, b);

    return ExpandedProtomatrix{Protomatrix(std::move(entries), std::move(punctured), cap),
                               std::move(row_type), std::move(col_type)};
}

Protomatrix expand_type_description(const TypeDescription& t, const OccurrenceAssignment& a, int entry_cap) {
    return expand_with_provenance(t, a, entry_cap).matrix;
}

namespace {

// t disjoint random q x q permutations, as a 0/1 block with row/col sums t.
// Rejection sampling with a cyclic-shift fallback so termination is certain.
std::vector<std::vector<int>> random_binary_block(int q, int t, SplitMix64& rng) {
    std::vector<std::vector<int>> block(static_cast<std::size_t>(q),
                                        std::vector<int>(static_cast<std::size_t>(q), 0));
    std::vector<int> perm(static_cast<std::size_t>(q));
    std::iota(perm.begin(), perm.end(), 0);

    int placed = 0;
    for (int attempt = 0; placed < t && attempt < 200; ++attempt) {
        rng.shuffle(perm);
        bool clash = false;
        for (int r = 0; r < q && !clash; ++r)
            clash = block[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] != 0;
        if (clash) continue;
        for (int r = 0; r < q; ++r)
            block[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] = 1;
        ++placed;
    }
    if (placed < t) {
        // Latin fallback: one random permutation plus distinct cyclic shifts
        for (auto& row : block) std::fill(row.begin(), row.end(), 0);
        rng.shuffle(perm);
        std::vector<int> shifts(static_cast<std::size_t>(q));
        std::iota(shifts.begin(), shifts.end(), 0);
        rng.shuffle(shifts);
        for (int s = 0; s < t; ++s) {
            for (int r = 0; r < q; ++r) {
                const int col = (perm[static_cast<std::size_t>(r)] + shifts[static_cast<std::size_t>(s)]) % q;
                block[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] = 1;
            }
        }
    }
    return block;
}

} // namespace

TypeDescription lift_type_description(const TypeDescription& t, int q_tilde, std::uint64_t seed) {
    if (q_tilde < 1) throw ValidationError("type lift: q~ must be positive");
    const int K = t.num_cn_types();
    const int L = t.num_vn_types();
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < L; ++j) {
            if (t(i, j) > q_tilde)
                throw ValidationError("type lift: entry " + std::to_string(t(i, j)) + " at (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      ") exceeds q~=" + std::to_string(q_tilde) +
                                      " and cannot be decomposed into disjoint permutations");
        }
    }

    const int q = q_tilde;
    std::vector<std::vector<int>> lifted(static_cast<std::size_t>(K * q),
                                         std::vector<int>(static_cast<std::size_t>(L * q), 0));
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < L; ++j) {
            if (t(i, j) == 0) continue;
            SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(L) +
                                              static_cast<std::uint64_t>(j)));
            const auto block = random_binary_block(q, t(i, j), rng);
            for (int r = 0; r < q; ++r)
                for (int s = 0; s < q; ++s)
                    lifted[static_cast<std::size_t>(i * q + r)][static_cast<std::size_t>(j * q + s)] =
                        block[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
        }
    }

    std::vector<int> punctured;
    for (int j : t.punctured_vn_types())
        for (int s = 0; s < q; ++s) punctured.push_back(j * q + s);

    // fixed types are a prefix in the source, so their sub-types stay a prefix
    return TypeDescription(t.num_fixed_cn() * q, t.num_fixed_vn() * q, std::move(lifted), std::move(punctured));
}

BigUint search_space_size(int num_optimizable_types, int total_occurrences) {
    if (num_optimizable_types < 1) throw ValidationError("search space: S must be positive");
    if (total_occurrences < 1) throw ValidationError("search space: h must be positive");
    const auto s = static_cast<std::uint64_t>(num_optimizable_types);
    const auto h = static_cast<std::uint64_t>(total_occurrences);
    return BigUint::binomial(s + h - 1, h - 1);
}

BigUint conventional_search_space_size(int entry_cap, int rows, int cols) {
    if (entry_cap < 1 || rows < 1 || cols < 1)
        throw ValidationError("search space: e_p, m, n must be positive");
    return BigUint::pow(static_cast<std::uint64_t>(entry_cap) + 1,
                        static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols));
}

TypeDescription make_ldgm_family() {
    // Columns 0-1: fixed (transmitted) variable types; columns 2-7: dedicated
    // degree-one parity columns, one per optimizable check type.
    std::vector<std::vector<int>> t = {
        {2, 2, 0, 0, 0, 0, 0, 0},
        {1, 1, 1, 0, 0, 0, 0, 0},
        {2, 1, 0, 1, 0, 0, 0, 0},
        {1, 2, 0, 0, 1, 0, 0, 0},
        {2, 2, 0, 0, 0, 1, 0, 0},
        {3, 1, 0, 0, 0, 0, 1, 0},
        {1, 3, 0, 0, 0, 0, 0, 1},
    };
    return TypeDescription(1, 2, std::move(t));
}

} // namespace tbp
