#pragma once

#include <string>
#include <vector>

#include "tbp/de.hpp"
#include "tbp/monte_carlo.hpp"
#include "tbp/pexit.hpp"
#include "tbp/rational.hpp"

namespace tbp {

// Deterministic text renderings of the tool's artifacts. The CLI writes
// exactly these strings, so re-runs with identical seeds are byte-identical.

std::string format_double(double v); // shortest round-trippable, locale-free

std::string history_csv(const std::vector<de::GenerationStats>& history);

std::string results_csv(const std::vector<sim::MonteCarloRecord>& records);

// columns: rate, eb_n0_db_star, es_n0_db_star, capacity_limit_db, gap_db,
// beta_at_threshold
std::string threshold_csv(const Rational& rate, const pexit::Threshold& th);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace tbp
