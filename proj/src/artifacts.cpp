#include "tbp/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tbp/errors.hpp"

namespace tbp {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string history_csv(const std::vector<de::GenerationStats>& history) {
    std::ostringstream out;
    out << "generation,best_threshold_db,mean_threshold_db,evaluations,cache_hits\n";
    for (const auto& row : history) {
        out << row.generation << ',' << format_double(row.best_threshold_db) << ','
            << format_double(row.mean_threshold_db) << ',' << row.evaluations << ',' << row.cache_hits
            << '\n';
    }
    return out.str();
}

std::string results_csv(const std::vector<sim::MonteCarloRecord>& records) {
    std::ostringstream out;
    out << "es_n0_db,eb_n0_db,frames,frame_errors,bit_errors,fer,fer_ci_lo,fer_ci_hi,ber,avg_iters\n";
    for (const auto& r : records) {
        out << format_double(r.es_n0_db) << ',' << format_double(r.eb_n0_db) << ',' << r.frames << ','
            << r.frame_errors << ',' << r.bit_errors << ',' << format_double(r.fer) << ','
            << format_double(r.fer_ci_lo) << ',' << format_double(r.fer_ci_hi) << ','
            << format_double(r.ber) << ',' << format_double(r.avg_iterations) << '\n';
    }
    return out.str();
}

std::string threshold_csv(const Rational& rate, const pexit::Threshold& th) {
    const double es_star = th.eb_n0_db_star + 10.0 * std::log10(rate.to_double());
    const double limit = pexit::capacity_limit_eb_db(rate);
    const double beta = pexit::reconciliation_efficiency(rate, es_star);
    std::ostringstream out;
    out << "rate,eb_n0_db_star,es_n0_db_star,capacity_limit_db,gap_db,beta_at_threshold\n";
    out << rate.str() << ',' << format_double(th.eb_n0_db_star) << ',' << format_double(es_star) << ','
        << format_double(limit) << ',' << format_double(th.eb_n0_db_star - limit) << ','
        << format_double(beta) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ValidationError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace tbp
