#include "tbp/pexit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tbp/errors.hpp"

namespace tbp::pexit {

namespace {

// MI is clamped to [0, 1 - kMiClamp] before any inversion; in the variance
// domain that caps sigma^2 at s_max.
constexpr double kMiClamp = 1e-15;

// Bisect until the sigma bracket itself collapses, so the result stays
// accurate even where J is nearly flat (the public j_inverse exits early on
// the MI residual instead).
double j_inverse_sigma(const JFunction& j, double mi) {
    if (mi <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (j(hi) < mi && hi < 512.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (j(mid) < mi) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct Clamps {
    double sigma_max;
    double s_max;      // (J^-1(1 - kMiClamp))^2
    double s_clamp_lo; // (J^-1(kMiClamp))^2; below this 1 - J(sqrt(s)) clamps
};

const Clamps& clamps() {
    static const Clamps c = [] {
        const JFunction& j = default_j();
        const double sm = j_inverse_sigma(j, 1.0 - kMiClamp);
        const double sl = j_inverse_sigma(j, kMiClamp);
        return Clamps{sm, sm * sm, sl * sl};
    }();
    return c;
}

// Exact dual map g(s) = (J^-1(1 - J(sqrt(s))))^2: what one unit of an
// incoming message contributes on the other side of a check.
double g_exact(double s, const JFunction& j) {
    if (s <= 0.0) return clamps().s_max;
    const double mi = 1.0 - j(std::sqrt(s));
    if (mi >= 1.0 - kMiClamp) return clamps().s_max;
    if (mi <= 0.0) return 0.0;
    const double sigma = j_inverse_sigma(j, mi);
    return sigma * sigma;
}

double g_exact(double s) { return g_exact(s, default_j()); }

double j_of_s_exact(double s, const JFunction& j) {
    if (s <= 0.0) return 0.0;
    return j(std::sqrt(s));
}

double j_of_s_exact(double s) { return j_of_s_exact(s, default_j()); }

// Monotone cubic Hermite table over a uniform grid in u = ln(s).
// Derivatives are fourth-order central differences passed through the
// Fritsch-Carlson limiter, so interpolation never breaks monotonicity.
class LogGridTable {
public:
    template <typename F>
    LogGridTable(double s_lo, double s_hi, int knots, F&& f) : n_(knots) {
        u_lo_ = std::log(s_lo);
        u_hi_ = std::log(s_hi);
        du_ = (u_hi_ - u_lo_) / (n_ - 1);
        inv_du_ = 1.0 / du_;
        s_lo_ = s_lo;
        s_hi_ = s_hi;
        y_.resize(static_cast<std::size_t>(n_));
        d_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) y_[static_cast<std::size_t>(i)] = f(std::exp(u_lo_ + du_ * i));

        auto yi = [&](int i) { return y_[static_cast<std::size_t>(std::clamp(i, 0, n_ - 1))]; };
        for (int i = 0; i < n_; ++i) {
            double d;
            if (i >= 2 && i <= n_ - 3)
                d = (yi(i - 2) - 8.0 * yi(i - 1) + 8.0 * yi(i + 1) - yi(i + 2)) / (12.0 * du_);
            else if (i == 0)
                d = (yi(1) - yi(0)) / du_;
            else if (i == n_ - 1)
                d = (yi(n_ - 1) - yi(n_ - 2)) / du_;
            else
                d = (yi(i + 1) - yi(i - 1)) / (2.0 * du_);
            d_[static_cast<std::size_t>(i)] = d;
        }
        // per interval, slopes of matching sign and |d| <= 3 |secant|
        for (int i = 0; i + 1 < n_; ++i) {
            const double sec = (yi(i + 1) - yi(i)) * inv_du_;
            auto& dl = d_[static_cast<std::size_t>(i)];
            auto& dr = d_[static_cast<std::size_t>(i + 1)];
            if (sec == 0.0) {
                dl = 0.0;
                dr = 0.0;
            } else {
                if (dl / sec < 0.0) dl = 0.0;
                else if (std::abs(dl) > 3.0 * std::abs(sec)) dl = 3.0 * sec;
                if (dr / sec < 0.0) dr = 0.0;
                else if (std::abs(dr) > 3.0 * std::abs(sec)) dr = 3.0 * sec;
            }
        }
    }

    double s_lo() const { return s_lo_; }
    double s_hi() const { return s_hi_; }
    double left_value() const { return y_.front(); }
    double right_value() const { return y_.back(); }

    // caller handles out-of-range s
    double eval(double s) const {
        const double u = std::log(s);
        const double t = (u - u_lo_) * inv_du_;
        int i = static_cast<int>(t);
        i = std::clamp(i, 0, n_ - 2);
        const double f = std::clamp(t - i, 0.0, 1.0);
        const double y0 = y_[static_cast<std::size_t>(i)];
        const double y1 = y_[static_cast<std::size_t>(i + 1)];
        const double m0 = d_[static_cast<std::size_t>(i)] * du_;
        const double m1 = d_[static_cast<std::size_t>(i + 1)] * du_;
        const double f2 = f * f;
        const double f3 = f2 * f;
        return (2.0 * f3 - 3.0 * f2 + 1.0) * y0 + (f3 - 2.0 * f2 + f) * m0 +
               (-2.0 * f3 + 3.0 * f2) * y1 + (f3 - f2) * m1;
    }

private:
    int n_;
    double u_lo_, u_hi_, du_, inv_du_, s_lo_, s_hi_;
    std::vector<double> y_, d_;
};

// Fast tables for g and J(sqrt(s)), built once on first use.
class DualMapTables {
public:
    static const DualMapTables& instance() {
        static const DualMapTables t;
        return t;
    }

    double g(double s) const {
        if (s <= g_->s_lo()) return clamps().s_max;
        if (s >= g_->s_hi()) return 0.0;
        return g_->eval(s);
    }

    double j_of_s(double s) const {
        if (s <= j_->s_lo()) return j_small_slope_ * s;
        if (s >= j_->s_hi()) return j_->right_value();
        return j_->eval(s);
    }

private:
    DualMapTables() {
        const Clamps& c = clamps();
        g_.emplace(c.s_clamp_lo, 600.0, 65536, [](double s) { return g_exact(s); });
        j_.emplace(1e-14, c.s_max, 65536, [](double s) { return j_of_s_exact(s); });
        j_small_slope_ = j_of_s_exact(1e-14) / 1e-14;
    }

    std::optional<LogGridTable> g_;
    std::optional<LogGridTable> j_;
    double j_small_slope_ = 0.0;
};

struct Evaluator {
    const JFunction* custom_j; // non-null forces exact evaluation with this rule
    bool exact;
    double g(double s) const {
        if (custom_j != nullptr) return g_exact(s, *custom_j);
        return exact ? g_exact(s) : DualMapTables::instance().g(s);
    }
    double j_of_s(double s) const {
        if (custom_j != nullptr) return j_of_s_exact(s, *custom_j);
        return exact ? j_of_s_exact(s) : DualMapTables::instance().j_of_s(s);
    }
};

struct TypedEdge {
    int row;
    int col;
    double w_vn; // multiplicity seen by the variable-node update
    double w_cn; // multiplicity seen by the check-node update
};

// One mutual-information evolution run in the variance domain: messages are
// tracked as s = (J^-1(I))^2. Per iteration: variable update, check update,
// a-posteriori check.
PexitResult run_mi_evolution(int num_cols, const std::vector<TypedEdge>& edges,
                             const std::vector<double>& s_ch, const PexitOptions& opt,
                             const std::vector<int>& vn_labels) {
    if (opt.gh_points < 1) throw ValidationError("pexit: quadrature order must be positive");
    std::optional<JFunction> custom;
    if (opt.gh_points != 100) custom.emplace(opt.gh_points);
    const Evaluator ev{custom ? &*custom : nullptr, opt.exact_j};
    const std::size_t ne = edges.size();

    std::vector<double> q_c(ne, 0.0); // (J^-1(I_Ec))^2 per edge
    std::vector<double> d_v(ne, 0.0); // dual of the variable message per edge
    std::vector<double> colsum(static_cast<std::size_t>(num_cols), 0.0);
    std::vector<double> rowsum;
    {
        int max_row = 0;
        for (const auto& e : edges) max_row = std::max(max_row, e.row);
        rowsum.assign(static_cast<std::size_t>(max_row + 1), 0.0);
    }

    PexitResult result;
    if (opt.record_trajectory) result.trajectory_vn_types = vn_labels;

    double prev_min = -1.0;
    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        // variable-node update (q_c still holds the previous iteration)
        std::fill(colsum.begin(), colsum.end(), 0.0);
        for (std::size_t e = 0; e < ne; ++e)
            colsum[static_cast<std::size_t>(edges[e].col)] += edges[e].w_vn * q_c[e];
        for (std::size_t e = 0; e < ne; ++e) {
            const auto& ed = edges[e];
            const double s_v = std::max(0.0, colsum[static_cast<std::size_t>(ed.col)] - q_c[e] +
                                                 s_ch[static_cast<std::size_t>(ed.col)]);
            d_v[e] = ev.g(s_v);
        }

        // check-node update
        std::fill(rowsum.begin(), rowsum.end(), 0.0);
        for (std::size_t e = 0; e < ne; ++e)
            rowsum[static_cast<std::size_t>(edges[e].row)] += edges[e].w_cn * d_v[e];
        for (std::size_t e = 0; e < ne; ++e) {
            const double s_dual = std::max(0.0, rowsum[static_cast<std::size_t>(edges[e].row)] - d_v[e]);
            q_c[e] = ev.g(s_dual);
        }

        // a-posteriori mutual information per variable node
        std::fill(colsum.begin(), colsum.end(), 0.0);
        for (std::size_t e = 0; e < ne; ++e)
            colsum[static_cast<std::size_t>(edges[e].col)] += edges[e].w_vn * q_c[e];
        double min_app = 1.0;
        std::vector<double> apps;
        if (opt.record_trajectory) apps.resize(static_cast<std::size_t>(num_cols));
        for (int c = 0; c < num_cols; ++c) {
            const double app =
                ev.j_of_s(colsum[static_cast<std::size_t>(c)] + s_ch[static_cast<std::size_t>(c)]);
            if (opt.record_trajectory) apps[static_cast<std::size_t>(c)] = app;
            min_app = std::min(min_app, app);
        }
        if (opt.record_trajectory) result.app_trajectory.push_back(std::move(apps));

        result.iterations = iter;
        result.final_min_app = min_app;
        if (min_app >= 1.0 - opt.tol) {
            result.converged = true;
            return result;
        }
        if (prev_min >= 0.0 && min_app - prev_min < opt.stall_delta) return result; // stalled
        prev_min = min_app;
    }
    return result;
}

double channel_variance(const ChannelQuality& ch) {
    const double s = ch.sigma_ch();
    return std::min(s * s, clamps().s_max);
}

} // namespace

double ChannelQuality::eb_n0_linear() const { return std::pow(10.0, eb_n0_db / 10.0); }

double ChannelQuality::es_n0_db() const { return eb_n0_db + 10.0 * std::log10(rate.to_double()); }

double ChannelQuality::sigma_ch() const { return std::sqrt(8.0 * rate.to_double() * eb_n0_linear()); }

ChannelQuality ChannelQuality::from_eb(double eb_db, Rational rate) {
    if (rate.num() <= 0) throw ValidationError("channel quality: rate must be positive");
    return ChannelQuality{eb_db, rate};
}

ChannelQuality ChannelQuality::from_es(double es_db, Rational rate) {
    if (rate.num() <= 0) throw ValidationError("channel quality: rate must be positive");
    return ChannelQuality{es_db - 10.0 * std::log10(rate.to_double()), rate};
}

PexitResult pexit_converges(const Protomatrix& b, const ChannelQuality& ch, const PexitOptions& opt) {
    std::vector<TypedEdge> edges;
    for (int i = 0; i < b.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            if (b(i, j) > 0)
                edges.push_back({i, j, static_cast<double>(b(i, j)), static_cast<double>(b(i, j))});
        }
    }
    const double s_channel = channel_variance(ch);
    std::vector<double> s_ch(static_cast<std::size_t>(b.cols()), s_channel);
    for (int p : b.punctured()) s_ch[static_cast<std::size_t>(p)] = 0.0;

    std::vector<int> labels(static_cast<std::size_t>(b.cols()));
    for (int j = 0; j < b.cols(); ++j) labels[static_cast<std::size_t>(j)] = j;
    return run_mi_evolution(b.cols(), edges, s_ch, opt, labels);
}

PexitResult tbp_pexit_converges(const TypeDescription& t, const OccurrenceAssignment& a,
                                const ChannelQuality& ch, const PexitOptions& opt) {
    const int k = t.num_fixed_cn();
    const int l = t.num_fixed_vn();
    const auto& c = a.cn_occurrences();
    const auto& v = a.vn_occurrences();

    // compact indices for the present VN types
    std::vector<int> vn_index(static_cast<std::size_t>(t.num_vn_types()), -1);
    std::vector<int> vn_labels;
    for (int j = 0; j < t.num_vn_types(); ++j) {
        if (j < l || v[static_cast<std::size_t>(j)] > 0) {
            vn_index[static_cast<std::size_t>(j)] = static_cast<int>(vn_labels.size());
            vn_labels.push_back(j);
        }
    }

    std::vector<TypedEdge> edges;
    for (int i = 0; i < t.num_cn_types(); ++i) {
        if (i >= k && c[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; j < t.num_vn_types(); ++j) {
            if (t(i, j) == 0) continue;
            if (j >= l && v[static_cast<std::size_t>(j)] == 0) continue;
            const double tij = t(i, j);
            // A fixed variable node sees all c_i occurrences of check type i;
            // a fixed check node sees all v_j occurrences of variable type j;
            // optimizable-optimizable contacts are matched one-to-one.
            const double w_vn = tij * (j < l ? static_cast<double>(c[static_cast<std::size_t>(i)]) : 1.0);
            const double w_cn =
                tij * ((i < k && j >= l) ? static_cast<double>(v[static_cast<std::size_t>(j)]) : 1.0);
            edges.push_back({i, vn_index[static_cast<std::size_t>(j)], w_vn, w_cn});
        }
    }

    const double s_channel = channel_variance(ch);
    std::vector<double> s_ch(vn_labels.size());
    for (std::size_t idx = 0; idx < vn_labels.size(); ++idx)
        s_ch[idx] = t.is_punctured_type(vn_labels[idx]) ? 0.0 : s_channel;

    return run_mi_evolution(static_cast<int>(vn_labels.size()), edges, s_ch, opt, vn_labels);
}

namespace {

Threshold bisect_threshold(const std::function<PexitResult(double)>& run, const ThresholdSearch& search) {
    if (!(search.lo_db < search.hi_db)) throw ValidationError("threshold search: need lo_db < hi_db");
    if (!(search.precision_db > 0.0)) throw ValidationError("threshold search: precision must be positive");

    std::map<double, PexitResult> memo;
    auto eval = [&](double db) -> const PexitResult& {
        auto it = memo.find(db);
        if (it == memo.end()) it = memo.emplace(db, run(db)).first;
        return it->second;
    };

    double lo = search.lo_db;
    double hi = search.hi_db;

    double step = 1.0;
    while (!eval(hi).converged) {
        if (hi >= 30.0) throw UndecodableError("ensemble undecodable: no convergence up to +30 dB Eb/N0");
        hi = std::min(30.0, hi + step);
        step *= 2.0;
    }

    step = 1.0;
    while (eval(lo).converged) {
        hi = std::min(hi, lo);
        if (lo <= -30.0) return Threshold{lo, 0.0, eval(lo).iterations, true};
        lo = std::max(-30.0, lo - step);
        step *= 2.0;
    }

    while (hi - lo > search.precision_db) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid).converged) hi = mid; else lo = mid;
    }
    return Threshold{hi, hi - lo, eval(hi).iterations, false};
}

} // namespace

Threshold threshold(const Protomatrix& b, const ThresholdSearch& search, const PexitOptions& opt) {
    const Rational rate = design_rate(b);
    if (rate.num() <= 0) throw ValidationError("threshold: non-positive design rate");
    return bisect_threshold(
        [&](double db) { return pexit_converges(b, ChannelQuality::from_eb(db, rate), opt); }, search);
}

Threshold tbp_threshold(const TypeDescription& t, const OccurrenceAssignment& a,
                        const ThresholdSearch& search, const PexitOptions& opt) {
    const Rational rate = tbp_design_rate(t, a);
    if (rate.num() <= 0) throw ValidationError("threshold: non-positive design rate");
    return bisect_threshold(
        [&](double db) { return tbp_pexit_converges(t, a, ChannelQuality::from_eb(db, rate), opt); }, search);
}

double bi_awgn_capacity(double es_n0_db) {
    const double es = std::pow(10.0, es_n0_db / 10.0);
    return j_function(std::sqrt(8.0 * es));
}

double reconciliation_efficiency(Rational rate, double es_n0_db) {
    const double capacity = bi_awgn_capacity(es_n0_db);
    if (capacity <= 0.0)
        throw ValidationError("reconciliation efficiency: channel capacity is zero at " +
                              std::to_string(es_n0_db) + " dB Es/N0");
    return rate.to_double() / capacity;
}

double capacity_limit_eb_db(Rational rate) {
    const double r = rate.to_double();
    if (r <= 0.0 || r >= 1.0) throw ValidationError("capacity limit: rate must be in (0, 1)");
    const double sigma = j_inverse(r);
    return 10.0 * std::log10(sigma * sigma / (8.0 * r));
}

} // namespace tbp::pexit
