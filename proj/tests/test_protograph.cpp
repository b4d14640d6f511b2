#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tbp/biguint.hpp"
#include "tbp/errors.hpp"
#include "tbp/protomatrix.hpp"
#include "tbp/rational.hpp"
#include "tbp/rng.hpp"
#include "tbp/type_description.hpp"

using namespace tbp;

TEST_CASE("rational arithmetic is exact and canonical") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(1, -2).num() == -1);
    CHECK(Rational(1, 10).str() == "1/10");
    CHECK(Rational(5, 1).str() == "5");
    CHECK(Rational::parse("1/100") == Rational(1, 100));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), ValidationError);
    CHECK_THROWS_AS(Rational::parse("x/y"), ParseError);
}

TEST_CASE("biguint binomials, powers and rendering") {
    CHECK(BigUint::binomial(13, 7).str() == "1716");
    CHECK(BigUint::binomial(1, 0).str() == "1");
    CHECK(BigUint::pow(5, 16).str() == "152587890625");
    CHECK(BigUint::pow(2, 128).str() == "340282366920938463463374607431768211456");
    CHECK(BigUint(12345678901234567890ULL).str() == "12345678901234567890");
    CHECK(BigUint::binomial(60, 30).fits_u64());
}

TEST_CASE("design rate on protomatrices") {
    CHECK(design_rate(Protomatrix({{3, 3}})) == Rational(1, 2));

    // single information column: m = n - 1
    Protomatrix tall({{1, 1, 1, 1, 1},
                      {1, 1, 1, 1, 1},
                      {1, 1, 1, 1, 1},
                      {1, 1, 1, 1, 1}});
    CHECK(design_rate(tall) == Rational(1, 5));

    std::vector<std::vector<int>> m7(7, std::vector<int>(9, 1));
    CHECK(design_rate(Protomatrix(m7, {0})) == Rational(1, 4));
}

TEST_CASE("protomatrix invariants are enforced by name") {
    CHECK_THROWS_WITH_AS(Protomatrix({{1, -1}}), doctest::Contains("negative entry"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{0, 0}, {1, 1}}, {}, 30), doctest::Contains("n > m"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{0, 0}}), doctest::Contains("all-zero row"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{1, 0}}), doctest::Contains("all-zero column"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{1, 1}}, {0, 0}), doctest::Contains("distinct"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{1, 1}}, {2}), doctest::Contains("out of range"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{1, 31}}), doctest::Contains("exceeds cap"), ValidationError);
    CHECK_THROWS_WITH_AS(Protomatrix({{1, 1}}, {0, 1}), doctest::Contains("all columns punctured"),
                         ValidationError);
}

TEST_CASE("protomatrix json round trip and defaults") {
    Protomatrix b({{2, 1, 0}, {0, 1, 1}}, {1}, 7);
    const auto parsed = Protomatrix::from_json_text(b.to_json_text());
    CHECK(parsed == b);

    // punctured omitted -> empty
    const auto defaulted = Protomatrix::from_json_text(R"({"m":1,"n":2,"matrix":[[1,2]]})");
    CHECK(defaulted.punctured().empty());
    CHECK(defaulted.entry_cap() == Protomatrix::kDefaultEntryCap);

    CHECK_THROWS_AS(Protomatrix::from_json_text("{"), ParseError);
    CHECK_THROWS_AS(Protomatrix::from_json_text(R"({"m":1,"n":2,"matrix":[[1,-2]]})"), ValidationError);
    CHECK_THROWS_AS(Protomatrix::from_json_text(R"({"m":2,"n":2,"matrix":[[1,1]]})"), ValidationError);
}

TEST_CASE("tbp design rate matches the fixed/optimizable counts") {
    const auto fam = make_ldgm_family();
    CHECK(tbp_design_rate(fam, 8) == Rational(1, 10));
    CHECK(tbp_design_rate(fam, 6) == Rational(1, 8));
    CHECK(tbp_design_rate(fam, 48) == Rational(1, 50));
    CHECK(tbp_design_rate(fam, 98) == Rational(1, 100));

    // l <= k has no positive rate
    TypeDescription degenerate(1, 1, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(tbp_design_rate(degenerate, 4), ValidationError);
}

TEST_CASE("expansion: identity occurrences reproduce the type matrix") {
    const auto fam = make_ldgm_family();
    const auto a = OccurrenceAssignment::induce(fam, {1, 1, 1, 1, 1, 1});
    const auto b = expand_type_description(fam, a);
    REQUIRE(b.rows() == fam.num_cn_types());
    REQUIRE(b.cols() == fam.num_vn_types());
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) CHECK(b(i, j) == fam(i, j));
}

TEST_CASE("expansion: repeated type gets distinct paired degree-one columns") {
    TypeDescription t(1, 2, {{2, 1, 0}, {1, 0, 1}});
    const auto a = OccurrenceAssignment::induce(t, {3});
    const auto ex = expand_with_provenance(t, a);
    const auto& b = ex.matrix;
    REQUIRE(b.rows() == 4);
    REQUIRE(b.cols() == 5);
    // fixed row connects only the fixed columns
    CHECK(b(0, 0) == 2);
    CHECK(b(0, 1) == 1);
    for (int j = 2; j < 5; ++j) CHECK(b(0, j) == 0);
    // each occurrence repeats the type row and owns one parity column
    for (int r = 1; r <= 3; ++r) {
        CHECK(b(r, 0) == 1);
        for (int j = 2; j < 5; ++j) CHECK(b(r, j) == (j == r + 1 ? 1 : 0));
    }
    // degree audit: optimizable nodes keep their type degrees
    for (int r = 1; r <= 3; ++r) CHECK(b.row_degree(r) == 2);
    for (int j = 2; j < 5; ++j) CHECK(b.col_degree(j) == 1);
    CHECK(ex.row_type == std::vector<int>{0, 1, 1, 1});
    CHECK(ex.col_type == std::vector<int>{0, 1, 2, 2, 2});
}

TEST_CASE("expansion propagates punctured types to every occurrence") {
    TypeDescription t(1, 2, {{2, 1, 0}, {1, 0, 1}}, {0, 2});
    const auto a = OccurrenceAssignment::induce(t, {2});
    const auto b = expand_type_description(t, a);
    CHECK(b.punctured() == std::vector<int>{0, 2, 3});
}

TEST_CASE("occurrence assignment validation") {
    const auto fam = make_ldgm_family();
    CHECK_THROWS_WITH_AS(OccurrenceAssignment::induce(fam, {1, 1}), doctest::Contains("expected 6"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(OccurrenceAssignment::induce(fam, {-1, 1, 1, 1, 1, 1}),
                         doctest::Contains("negative"), ValidationError);

    // paired types must occur equally often
    TypeDescription chained(1, 2, {{1, 1, 0, 0}, {1, 1, 1, 1}, {0, 1, 0, 1}});
    CHECK_THROWS_WITH_AS(OccurrenceAssignment::induce(chained, {1, 2}), doctest::Contains("c_i = v_j"),
                         ValidationError);
    CHECK_NOTHROW(OccurrenceAssignment::induce(chained, {2, 2}));

    // dropping every type that feeds a fixed node leaves it with degree 0
    TypeDescription lonely(1, 2, {{1, 0, 0}, {1, 1, 1}});
    CHECK_THROWS_WITH_AS(OccurrenceAssignment::induce(lonely, {0}), doctest::Contains("degree 0"),
                         ValidationError);

    // an optimizable VN type without an optimizable CN partner is rejected
    CHECK_THROWS_WITH_AS(TypeDescription(1, 1, {{1, 1}}), doctest::Contains("no optimizable CN partner"),
                         ValidationError);
}

TEST_CASE("rate identity: tbp rate equals the rate of the expansion") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto inst = oracle::random_tbp(seed, 6, 60, false);
        const auto a = OccurrenceAssignment::induce(inst.t, inst.counts);
        const auto b = expand_type_description(inst.t, a);
        CHECK(tbp_design_rate(inst.t, a) == design_rate(b));
    }
}

TEST_CASE("expansion degree preservation on random families") {
    for (std::uint64_t seed = 300; seed <= 340; ++seed) {
        const auto inst = oracle::random_tbp(seed);
        const auto a = OccurrenceAssignment::induce(inst.t, inst.counts);
        const auto ex = expand_with_provenance(inst.t, a);
        const int k = inst.t.num_fixed_cn();
        const int l = inst.t.num_fixed_vn();
        for (int r = 0; r < ex.matrix.rows(); ++r) {
            const int type = ex.row_type[static_cast<std::size_t>(r)];
            if (type < k) continue;
            int type_degree = 0;
            for (int j = 0; j < inst.t.num_vn_types(); ++j) type_degree += inst.t(type, j);
            CHECK(ex.matrix.row_degree(r) == type_degree);
        }
        for (int c = 0; c < ex.matrix.cols(); ++c) {
            const int type = ex.col_type[static_cast<std::size_t>(c)];
            if (type < l) continue;
            int type_degree = 0;
            for (int i = 0; i < inst.t.num_cn_types(); ++i) type_degree += inst.t(i, type);
            CHECK(ex.matrix.col_degree(c) == type_degree);
        }
    }
}

TEST_CASE("type lift: q~=1 on a binary description is the identity") {
    TypeDescription t(1, 2, {{1, 1, 0}, {1, 0, 1}});
    const auto lifted = lift_type_description(t, 1, 99);
    CHECK(lifted == t);
}

TEST_CASE("type lift: blocks have constant row and column sums") {
    const auto fam = make_ldgm_family();
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
        const auto lifted = lift_type_description(fam, 4, seed);
        CHECK(lifted.num_cn_types() == 4 * fam.num_cn_types());
        CHECK(lifted.num_fixed_cn() == 4 * fam.num_fixed_cn());
        CHECK(lifted.num_vn_types() == 4 * fam.num_vn_types());
        CHECK(lifted.num_fixed_vn() == 4 * fam.num_fixed_vn());
        for (int i = 0; i < fam.num_cn_types(); ++i) {
            for (int j = 0; j < fam.num_vn_types(); ++j) {
                for (int r = 0; r < 4; ++r) {
                    int row_sum = 0;
                    for (int s = 0; s < 4; ++s) {
                        const int e = lifted(4 * i + r, 4 * j + s);
                        CHECK((e == 0 || e == 1));
                        row_sum += e;
                    }
                    CHECK(row_sum == fam(i, j));
                }
                for (int s = 0; s < 4; ++s) {
                    int col_sum = 0;
                    for (int r = 0; r < 4; ++r) col_sum += lifted(4 * i + r, 4 * j + s);
                    CHECK(col_sum == fam(i, j));
                }
            }
        }
    }
    // determinism
    CHECK(lift_type_description(fam, 4, 5) == lift_type_description(fam, 4, 5));
}

TEST_CASE("type lift rejects entries above q~") {
    TypeDescription t(1, 2, {{3, 1, 0}, {1, 0, 1}});
    CHECK_THROWS_WITH_AS(lift_type_description(t, 2, 1), doctest::Contains("exceeds q~"), ValidationError);
    CHECK_NOTHROW(lift_type_description(t, 3, 1));
}

TEST_CASE("type lift inherits puncturing per sub-type") {
    TypeDescription t(1, 2, {{2, 1, 0}, {1, 0, 1}}, {2});
    const auto lifted = lift_type_description(t, 3, 4);
    CHECK(lifted.punctured_vn_types() == std::vector<int>{6, 7, 8});
}

TEST_CASE("search space sizes") {
    CHECK(search_space_size(6, 8).str() == "1716");
    CHECK(search_space_size(1, 1).str() == "1");
    CHECK(conventional_search_space_size(4, 8, 2).str() == "152587890625"); // 5^16
    CHECK_THROWS_AS(search_space_size(0, 5), ValidationError);
}

TEST_CASE("type description json round trip") {
    const auto fam = make_ldgm_family();
    CHECK(TypeDescription::from_json_text(fam.to_json_text()) == fam);

    TypeDescription with_punct(1, 2, {{2, 1, 0}, {1, 0, 1}}, {1});
    CHECK(TypeDescription::from_json_text(with_punct.to_json_text()) == with_punct);

    // a wrong explicit pairing is rejected
    CHECK_THROWS_AS(TypeDescription::from_json_text(
                        R"({"K":2,"k":1,"L":3,"l":2,"matrix":[[2,1,0],[1,0,1]],"pairing":[[1,1]]})"),
                    ValidationError);
    CHECK_THROWS_AS(TypeDescription::from_json_text("not json"), ParseError);
}

TEST_CASE("assignment json round trip") {
    const auto fam = make_ldgm_family();
    const auto a = OccurrenceAssignment::induce(fam, {4, 0, 1, 1, 0, 2});
    const auto parsed = OccurrenceAssignment::from_json_text(fam, a.to_json_text());
    CHECK(parsed.cn_occurrences() == a.cn_occurrences());
    CHECK(parsed.vn_occurrences() == a.vn_occurrences());
    CHECK(parsed.total_optimizable() == 8);
}

TEST_CASE("serialization round trip on random valid objects") {
    for (std::uint64_t seed = 500; seed < 530; ++seed) {
        const auto inst = oracle::random_tbp(seed);
        CHECK(TypeDescription::from_json_text(inst.t.to_json_text()) == inst.t);
        const auto a = OccurrenceAssignment::induce(inst.t, inst.counts);
        const auto b = expand_type_description(inst.t, a);
        CHECK(Protomatrix::from_json_text(b.to_json_text()) == b);
    }
}
