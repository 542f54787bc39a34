#include "gsearch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gsearch/error.hpp"
#include "gsearch/rng.hpp"

namespace gsearch {

Performance game_performance(std::span<const double> scores) {
  if (scores.empty()) throw ContractViolation("game_performance needs at least one score");
  Performance p;
  p.n = scores.size();
  double sum = 0;
  for (double s : scores) sum += s;
  p.mean = sum / static_cast<double>(p.n);
  if (p.n > 1) {
    double ss = 0;
    for (double s : scores) ss += (s - p.mean) * (s - p.mean);
    const double sd = std::sqrt(ss / static_cast<double>(p.n - 1));
    p.radius = 1.96 * sd / std::sqrt(static_cast<double>(p.n));
  }
  return p;
}

double stratified_statistic(std::span<const Stratum> strata, bool pooled) {
  double total = 0;
  std::size_t count = 0;
  double of_means = 0;
  for (const auto& s : strata) {
    if (s.empty()) throw ContractViolation("empty stratum");
    double sum = 0;
    for (const auto& x : s) sum += x.score;
    total += sum;
    count += s.size();
    of_means += sum / static_cast<double>(s.size());
  }
  if (strata.empty()) throw ContractViolation("no strata");
  return pooled ? total / static_cast<double>(count) : of_means / static_cast<double>(strata.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ContractViolation("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval stratified_bootstrap_ci(std::span<const Stratum> strata, const BootstrapOptions& options) {
  if (options.replicates == 0) throw ContractViolation("bootstrap needs B >= 1");
  if (strata.empty()) throw ContractViolation("bootstrap needs at least one stratum");
  std::vector<std::vector<double>> sorted;
  for (const auto& s : strata) {
    if (s.empty()) throw ContractViolation("empty stratum");
    Stratum copy = s;
    std::stable_sort(copy.begin(), copy.end(),
                     [](const Sample& a, const Sample& b) { return a.seed < b.seed; });
    std::vector<double> scores;
    for (const auto& x : copy) scores.push_back(x.score);
    sorted.push_back(std::move(scores));
  }
  std::size_t total_n = 0;
  for (const auto& s : sorted) total_n += s.size();

  std::vector<double> stats(options.replicates);
  for (std::size_t b = 0; b < options.replicates; ++b) {
    Rng rng(derive_seed({options.seed, b}));
    double of_means = 0, total = 0;
    for (const auto& s : sorted) {
      double sum = 0;
      for (std::size_t i = 0; i < s.size(); ++i) sum += s[rng.below(s.size())];
      of_means += sum / static_cast<double>(s.size());
      total += sum;
    }
    stats[b] = options.pooled ? total / static_cast<double>(total_n)
                              : of_means / static_cast<double>(sorted.size());
  }
  std::sort(stats.begin(), stats.end());
  return {quantile_sorted(stats, options.level / 2), quantile_sorted(stats, 1 - options.level / 2)};
}

namespace {

long long percent(double fraction) {
  const long long v = std::llround(fraction * 100);
  return v == 0 ? 0 : v;
}

std::string fixed2(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v == 0 ? 0.0 : *v);
  // Values that round to zero print without a sign.
  if (std::string(buf) == "-0.00") return "0.00";
  return buf;
}

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

}  // namespace

std::string format_performance(const Performance& p) {
  return std::to_string(percent(p.mean)) + " ± " + std::to_string(percent(p.radius));
}

ReportRow star_row(const Report& report) {
  ReportRow star;
  star.algorithm = "*";
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t g = 0; g < report.games.size(); ++g) {
    std::optional<Performance> best;
    for (const auto& row : report.rows) {
      if (g < row.per_game.size() && row.per_game[g] && (!best || row.per_game[g]->mean > best->mean))
        best = row.per_game[g];
    }
    star.per_game.push_back(best);
    if (best) {
      sum += best->mean;
      ++counted;
    }
  }
  if (counted) star.mean = 100 * sum / static_cast<double>(counted);
  return star;
}

std::string emit_report(const Report& report, const std::string& format) {
  if (format != "csv" && format != "md") throw ConfigError("unknown report format '" + format + "'");
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"algorithm", "mean", "lower", "upper"};
  header.insert(header.end(), report.games.begin(), report.games.end());
  table.push_back(header);
  for (const auto& row : report.rows) {
    std::vector<std::string> cells{row.algorithm, fixed2(row.mean), fixed2(row.lower), fixed2(row.upper)};
    for (std::size_t g = 0; g < report.games.size(); ++g) {
      const bool has = g < row.per_game.size() && row.per_game[g];
      cells.push_back(has ? format_performance(*row.per_game[g]) : "-");
    }
    table.push_back(std::move(cells));
  }

  std::ostringstream out;
  if (format == "csv") {
    for (const auto& r : table) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::size_t> width(header.size(), 3);
  for (const auto& r : table)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], display_width(r[i]));
  auto line = [&](const std::vector<std::string>& r) {
    out << '|';
    for (std::size_t i = 0; i < r.size(); ++i)
      out << ' ' << r[i] << std::string(width[i] - display_width(r[i]), ' ') << " |";
    out << '\n';
  };
  line(table[0]);
  out << '|';
  for (std::size_t i = 0; i < header.size(); ++i) out << std::string(width[i] + 2, '-') << '|';
  out << '\n';
  for (std::size_t r = 1; r < table.size(); ++r) line(table[r]);
  return out.str();
}

}  // namespace gsearch
