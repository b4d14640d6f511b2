#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tbp/errors.hpp"
#include "tbp/pexit.hpp"

using namespace tbp;
using namespace tbp::pexit;

namespace {

const Protomatrix& regular36() {
    static const Protomatrix b({{3, 3}});
    return b;
}

} // namespace

TEST_CASE("channel quality conversions") {
    const auto ch = ChannelQuality::from_eb(2.0, Rational(1, 2));
    CHECK(std::abs(ch.es_n0_db() - (2.0 + 10.0 * std::log10(0.5))) < 1e-12);
    CHECK(std::abs(ch.sigma_ch() - std::sqrt(8.0 * 0.5 * std::pow(10.0, 0.2))) < 1e-12);
    const auto es = ChannelQuality::from_es(-1.0, Rational(1, 2));
    CHECK(std::abs(es.es_n0_db() - (-1.0)) < 1e-12);
    CHECK_THROWS_AS(ChannelQuality::from_eb(0.0, Rational(0, 1)), ValidationError);
}

TEST_CASE("noiseless channel converges in one iteration") {
    const auto r = pexit_converges(regular36(), ChannelQuality::from_eb(100.0, Rational(1, 2)));
    CHECK(r.converged);
    CHECK(r.iterations == 1);
}

TEST_CASE("far below capacity never converges") {
    const auto r = pexit_converges(regular36(), ChannelQuality::from_eb(-20.0, Rational(1, 2)));
    CHECK_FALSE(r.converged);
}

TEST_CASE("regular ensemble brackets its known threshold") {
    CHECK(pexit_converges(regular36(), ChannelQuality::from_eb(1.5, Rational(1, 2))).converged);
    CHECK_FALSE(pexit_converges(regular36(), ChannelQuality::from_eb(0.7, Rational(1, 2))).converged);
}

TEST_CASE("min app mutual information is non-decreasing over iterations") {
    PexitOptions opt;
    opt.record_trajectory = true;
    for (double eb : {0.9, 1.2, 2.0}) {
        const auto r = pexit_converges(regular36(), ChannelQuality::from_eb(eb, Rational(1, 2)), opt);
        double prev = -1.0;
        for (const auto& apps : r.app_trajectory) {
            double mn = 1.0;
            for (double a : apps) mn = std::min(mn, a);
            CHECK(mn >= prev - 1e-12);
            prev = mn;
        }
    }
}

TEST_CASE("convergence is monotone in Eb/N0 on a grid") {
    bool converged_before = false;
    for (double eb = -1.0; eb <= 4.01; eb += 0.25) {
        const bool now = pexit_converges(regular36(), ChannelQuality::from_eb(eb, Rational(1, 2))).converged;
        if (converged_before) CHECK(now);
        converged_before = converged_before || now;
    }
    CHECK(converged_before);
}

TEST_CASE("punctured node starts at zero channel information") {
    // punctured degree-1 pair on one check blocks all information flow
    Protomatrix blocked({{1, 1, 1}}, {0, 1});
    const auto r = pexit_converges(blocked, ChannelQuality::from_eb(20.0, design_rate(blocked)));
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(threshold(blocked), UndecodableError);
}

TEST_CASE("threshold of the regular (3,6) ensemble, cross-validated") {
    const auto th = threshold(regular36(), {-2.0, 6.0, 0.01});
    CHECK(th.eb_n0_db_star >= 1.05);
    CHECK(th.eb_n0_db_star <= 1.15);
    CHECK(th.bracket_width_db <= 0.01 + 1e-12);
    // bracketing invariant: converges at the star, fails one bracket below
    CHECK(pexit_converges(regular36(), ChannelQuality::from_eb(th.eb_n0_db_star, Rational(1, 2))).converged);
    CHECK_FALSE(pexit_converges(regular36(),
                                ChannelQuality::from_eb(th.eb_n0_db_star - th.bracket_width_db, Rational(1, 2)))
                    .converged);
}

TEST_CASE("threshold is stable under precision refinement") {
    const auto coarse = threshold(regular36(), {-2.0, 6.0, 0.02});
    const auto fine = threshold(regular36(), {-2.0, 6.0, 0.01});
    CHECK(std::abs(fine.eb_n0_db_star - coarse.eb_n0_db_star) <= 0.02 + 1e-12);
}

TEST_CASE("threshold auto-widens a bracket that misses") {
    const auto th = threshold(regular36(), {3.0, 4.0, 0.01}); // fails: threshold ~1.1 below lo
    CHECK(th.eb_n0_db_star <= 1.15);
    CHECK(th.eb_n0_db_star >= 1.05);
}

TEST_CASE("tbp pexit with unit occurrences equals the full recursion on T as a matrix") {
    const auto fam = make_ldgm_family();
    const auto a = OccurrenceAssignment::induce(fam, {1, 1, 1, 1, 1, 1});
    Protomatrix as_matrix(fam.entries());
    for (double eb : {0.0, 1.0, 3.0}) {
        const auto ch = ChannelQuality::from_eb(eb, tbp_design_rate(fam, a));
        const auto tb = tbp_pexit_converges(fam, a, ch);
        const auto fu = pexit_converges(as_matrix, ch);
        CHECK(tb.converged == fu.converged);
        CHECK(tb.iterations == fu.iterations);
    }
}

TEST_CASE("tbp family converges far above the Shannon limit of rate 1/10") {
    const auto fam = make_ldgm_family();
    const auto a = OccurrenceAssignment::induce(fam, {2, 1, 1, 2, 1, 1});
    const auto r = tbp_pexit_converges(fam, a, ChannelQuality::from_eb(6.0, Rational(1, 10)));
    CHECK(r.converged);
}

TEST_CASE("type-based and expanded recursions agree on random instances") {
    PexitOptions opt;
    opt.record_trajectory = true;
    for (std::uint64_t seed = 40; seed < 60; ++seed) {
        const auto inst = oracle::random_tbp(seed);
        const auto a = OccurrenceAssignment::induce(inst.t, inst.counts);
        const auto ex = expand_with_provenance(inst.t, a);
        tbp::SplitMix64 rng(seed * 31);
        const double eb = -4.0 + 10.0 * rng.next_double();
        Rational rate = tbp_design_rate(inst.t, a);
        if (rate.num() <= 0) continue;
        const auto ch = ChannelQuality::from_eb(eb, rate);

        const auto tb = tbp_pexit_converges(inst.t, a, ch, opt);
        const auto fu = pexit_converges(ex.matrix, ch, opt);
        CHECK(tb.converged == fu.converged);
        CHECK(tb.iterations == fu.iterations);

        REQUIRE(tb.app_trajectory.size() == fu.app_trajectory.size());
        double worst = 0.0;
        for (std::size_t it = 0; it < tb.app_trajectory.size(); ++it) {
            for (std::size_t col = 0; col < ex.col_type.size(); ++col) {
                const int type = ex.col_type[col];
                std::size_t ti = 0;
                while (tb.trajectory_vn_types[ti] != type) ++ti;
                worst = std::max(worst, std::abs(tb.app_trajectory[it][ti] - fu.app_trajectory[it][col]));
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("fast tables track the exact dual map") {
    // thresholds computed with tables and with exact J agree to the bracket
    const auto fast = threshold(regular36(), {-2.0, 6.0, 0.01});
    PexitOptions exact;
    exact.exact_j = true;
    const auto slow = threshold(regular36(), {-2.0, 6.0, 0.01}, exact);
    CHECK(std::abs(fast.eb_n0_db_star - slow.eb_n0_db_star) <= 0.01 + 1e-12);

    const auto fam = make_ldgm_family();
    const auto a = OccurrenceAssignment::induce(fam, {2, 1, 1, 2, 1, 1});
    for (double eb : {0.2, 1.0}) {
        const auto ch = ChannelQuality::from_eb(eb, tbp_design_rate(fam, a));
        CHECK(tbp_pexit_converges(fam, a, ch).converged ==
              tbp_pexit_converges(fam, a, ch, exact).converged);
    }
}

TEST_CASE("capacity and reconciliation efficiency") {
    // saturated channel: capacity -> 1, beta -> R
    CHECK(bi_awgn_capacity(40.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(reconciliation_efficiency(Rational(1, 2), 40.0) == doctest::Approx(0.5).epsilon(1e-9));

    // R equal to capacity gives beta = 1
    const double sigma = j_inverse(0.25);
    const double es_db = 10.0 * std::log10(sigma * sigma / 8.0);
    CHECK(reconciliation_efficiency(Rational(1, 4), es_db) == doctest::Approx(1.0).epsilon(1e-9));

    // rate 1/50 at the SNR where capacity is 0.025: beta = 0.8
    const double sigma2 = j_inverse(0.025);
    const double es2 = 10.0 * std::log10(sigma2 * sigma2 / 8.0);
    CHECK(reconciliation_efficiency(Rational(1, 50), es2) == doctest::Approx(0.8).epsilon(1e-9));

    CHECK_THROWS_AS(reconciliation_efficiency(Rational(1, 2), -4000.0), ValidationError);
}

TEST_CASE("capacity limit pins the rate") {
    for (auto rate : {Rational(1, 2), Rational(1, 10), Rational(1, 100)}) {
        const double eb_db = capacity_limit_eb_db(rate);
        const double es_db = eb_db + 10.0 * std::log10(rate.to_double());
        CHECK(bi_awgn_capacity(es_db) == doctest::Approx(rate.to_double()).epsilon(1e-9));
    }
    // the ultimate low-rate limit is ln 2 ~ -1.59 dB
    CHECK(capacity_limit_eb_db(Rational(1, 100)) > -1.59);
    CHECK(capacity_limit_eb_db(Rational(1, 100)) < -1.3);
}
