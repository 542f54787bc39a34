#include "gsearch/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "gsearch/error.hpp"

namespace gsearch {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const IniFile::Entry& e) {
  T out{};
  const auto& v = e.value;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("'" + e.key + "' expects a number, got '" + v + "'", e.line);
  return out;
}

double parse_real(const IniFile::Entry& e) {
  try {
    std::size_t used = 0;
    const double d = std::stod(e.value, &used);
    if (used == e.value.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + e.key + "' expects a real number, got '" + e.value + "'", e.line);
}

bool parse_bool(const IniFile::Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no" || e.value == "off") return false;
  throw ConfigError("'" + e.key + "' expects true or false, got '" + e.value + "'", e.line);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    auto piece = trim(std::string_view(s).substr(start, comma == std::string::npos ? s.npos : comma - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Re-throws errors from nested parsers with the config line attached.
template <typename F>
auto at_line(const IniFile::Entry& e, F&& f) {
  try {
    return f();
  } catch (const ConfigError& err) {
    if (err.line() > 0) throw;
    throw ConfigError(err.what(), e.line);
  } catch (const ContractViolation& err) {
    throw ConfigError(err.what(), e.line);
  }
}

}  // namespace

IniFile IniFile::parse(std::istream& in) {
  IniFile ini;
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto c = s.find_first_of("#;"); c != std::string::npos) {
      // ';' also separates algorithm parameters, so only a leading ';' is a comment.
      if (s[c] == '#' || trim(std::string_view(s).substr(0, c)).empty()) s.resize(c);
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw ConfigError("malformed section header", line);
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    Entry e{section, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError("missing key before '='", line);
    if (e.value.empty()) throw ConfigError("missing value for '" + e.key + "'", line);
    ini.entries_.push_back(std::move(e));
  }
  return ini;
}

SearchBudget TournamentConfig::budget() const {
  SearchBudget b;
  b.seconds = time_per_move;
  b.max_nodes = node_budget;
  return b;
}

void TournamentConfig::validate() const {
  if (games.empty()) throw ConfigError("no game configured ([games] game = ...)");
  if (candidates.empty() && grid.empty())
    throw ConfigError("no candidate algorithm configured ([algorithms] candidates = ...)");
  if (eval_count < 1) throw ConfigError("[evals] count must be at least 1");
  if (repetitions < 1) throw ConfigError("[tournament] repetitions must be at least 1");
  if (workers < 1) throw ConfigError("[tournament] workers must be at least 1");
  if (batch_workers < 1) throw ConfigError("[algorithms] batch_workers must be at least 1");
  if (!time_per_move && !node_budget)
    throw ConfigError("[budget] needs time_per_move or node_budget");
  if (time_per_move && !(*time_per_move > 0)) throw ConfigError("[budget] time_per_move must be > 0");
  if (node_budget && *node_budget < 1) throw ConfigError("[budget] node_budget must be >= 1");
  if (draw_cap < 1) throw ConfigError("[budget] draw_cap must be >= 1");
  if (range_samples < 1) throw ConfigError("[evals] range_samples must be >= 1");
  if (stats.bootstrap < 1) throw ConfigError("[stats] bootstrap must be >= 1");
  if (!(stats.level > 0 && stats.level < 1)) throw ConfigError("[stats] level must be in (0, 1)");
}

TournamentConfig parse_tournament_config(std::istream& in) {
  const IniFile ini = IniFile::parse(in);
  TournamentConfig c;
  bool cap_set = false;
  std::vector<std::pair<std::string, int>> game_texts;
  for (const auto& e : ini.entries()) {
    const std::string where = e.section + "." + e.key;
    if (where == "tournament.seed") c.seed = parse_number<std::uint64_t>(e);
    else if (where == "tournament.repetitions") c.repetitions = parse_number<int>(e);
    else if (where == "tournament.workers") c.workers = parse_number<int>(e);
    else if (where == "tournament.out") c.out = e.value;
    else if (where == "games.game") game_texts.emplace_back(e.value, e.line);
    else if (where == "games.games")
      for (auto& g : split_commas(e.value)) game_texts.emplace_back(g, e.line);
    else if (where == "evals.count") c.eval_count = parse_number<int>(e);
    else if (where == "evals.seed") c.eval_seed = parse_number<std::uint64_t>(e);
    else if (where == "evals.range_samples") c.range_samples = parse_number<std::size_t>(e);
    else if (where == "budget.time_per_move") c.time_per_move = parse_real(e);
    else if (where == "budget.node_budget") c.node_budget = parse_number<std::uint64_t>(e);
    else if (where == "budget.draw_cap") {
      c.draw_cap = parse_number<int>(e);
      cap_set = true;
    } else if (where == "algorithms.candidates")
      c.candidates = at_line(e, [&] { return parse_algorithm_list(e.value); });
    else if (where == "algorithms.benchmark")
      c.benchmark = at_line(e, [&] { return AlgorithmSpec::parse(e.value); });
    else if (where == "algorithms.batch_workers") c.batch_workers = parse_number<int>(e);
    else if (where == "algorithms.kbest_scope" || where == "algorithms.kbest.scope") {
      if (e.value == "all") c.kbest_scope = KbestScope::All;
      else if (e.value == "root") c.kbest_scope = KbestScope::Root;
      else throw ConfigError("kbest_scope must be 'all' or 'root'", e.line);
    } else if (where == "algorithms.solver") c.solver = parse_bool(e);
    else if (where == "algorithms.count_expansion") c.count_expansion = parse_bool(e);
    else if (where == "tune.grid") c.grid = e.value;
    else if (where == "stats.bootstrap") c.stats.bootstrap = parse_number<std::size_t>(e);
    else if (where == "stats.level") c.stats.level = parse_real(e);
    else if (where == "stats.seed") c.stats.seed = parse_number<std::uint64_t>(e);
    else if (where == "stats.statistic") {
      if (e.value == "per_game_mean") c.stats.pooled = false;
      else if (e.value == "pooled") c.stats.pooled = true;
      else throw ConfigError("statistic must be 'per_game_mean' or 'pooled'", e.line);
    } else {
      throw ConfigError("unknown key '" + e.key + "' in section [" + e.section + "]", e.line);
    }
  }
  for (const auto& [text, line] : game_texts) {
    GameSpec g = at_line(IniFile::Entry{"games", "game", text, line},
                         [&] { return GameSpec::parse(text); });
    if (cap_set && text.find("cap=") == std::string::npos) g.draw_cap = c.draw_cap;
    c.games.push_back(g);
  }
  c.validate();
  return c;
}

TournamentConfig load_tournament_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_tournament_config(in);
}

std::vector<AlgorithmSpec> expand_grid(const std::string& grid) {
  const auto pieces = split_commas(grid);
  if (pieces.empty()) throw ConfigError("empty tuning grid");
  std::vector<AlgorithmSpec> out;
  std::string prefix;  // "mcts:C=" from the first piece, reused by bare values
  for (const auto& p : pieces) {
    const bool bare = p.find(':') == std::string::npos && !prefix.empty() &&
                      p.find_first_not_of("0123456789.e-+") == std::string::npos;
    const bool named_value = p == "sqrt2" || p == "inf" || p == "√2" || p == "∞";
    if ((bare || named_value) && !prefix.empty()) {
      out.push_back(AlgorithmSpec::parse(prefix + p));
      continue;
    }
    out.push_back(AlgorithmSpec::parse(p));
    const auto colon = p.find(':');
    if (colon == std::string::npos) {
      prefix.clear();
    } else {
      const auto eq = p.find('=', colon);
      prefix = p.substr(0, (eq == std::string::npos ? colon : eq) + 1);
    }
  }
  return out;
}

}  // namespace gsearch
