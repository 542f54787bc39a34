#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gsearch {

/// One scored match inside a stratum. The seed fixes the canonical order used
/// for resampling.
struct Sample {
  std::uint64_t seed = 0;
  double score = 0;  // in {-1, 0, 1}
};
using Stratum = std::vector<Sample>;

/// Mean score and its 5% confidence radius 1.96 * s / sqrt(n), both as
/// fractions (multiply by 100 for percent). s is the sample standard
/// deviation; the radius is 0 for a single score.
struct Performance {
  double mean = 0;
  double radius = 0;
  std::size_t n = 0;
};
Performance game_performance(std::span<const double> scores);

struct Interval {
  double lower = 0;
  double upper = 0;
};

struct BootstrapOptions {
  std::size_t replicates = 10000;  // B
  double level = 0.05;
  std::uint64_t seed = 1;
  bool pooled = false;  // pooled mean instead of the mean of per-stratum means
};

/// The statistic the bootstrap resamples (mean of per-stratum means by default).
double stratified_statistic(std::span<const Stratum> strata, bool pooled = false);

/// Percentile interval of the statistic over B stratified resamples. Each
/// stratum is sorted by seed and then resampled with replacement at its own
/// size; replicate b draws from Rng(derive_seed({seed, b})). Throws
/// ContractViolation on an empty stratum or B == 0.
Interval stratified_bootstrap_ci(std::span<const Stratum> strata, const BootstrapOptions& options);

/// Linear-interpolation quantile of sorted data (type 7).
double quantile_sorted(std::span<const double> sorted, double p);

/// "25 ± 3": percentages rounded to the nearest integer.
std::string format_performance(const Performance& p);

struct ReportRow {
  std::string algorithm;
  std::optional<double> mean;   // percent
  std::optional<double> lower;  // percent
  std::optional<double> upper;  // percent
  std::vector<std::optional<Performance>> per_game;  // aligned with the game columns
};

struct Report {
  std::vector<std::string> games;
  std::vector<ReportRow> rows;
};

/// Star row of a tuning report: per game, the best row's performance; mean is
/// the average of those per-game bests; no interval.
ReportRow star_row(const Report& report);

/// "csv" or "md"; throws ConfigError for any other format.
std::string emit_report(const Report& report, const std::string& format);

}  // namespace gsearch
