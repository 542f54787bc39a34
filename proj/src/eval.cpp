#include "gsearch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "gsearch/error.hpp"
#include "gsearch/games.hpp"

namespace gsearch {

// ---------------------------------------------------------------- features

std::size_t feature_count(GameId game) {
  switch (game) {
    case GameId::TicTacToe: return 3;
    case GameId::Breakthrough: return 4;
    case GameId::Othello: return 4;
    case GameId::Hex: return 2;
    case GameId::Clobber: return 2;
  }
  return 0;
}

std::vector<double> baseline_weights(GameId game) {
  switch (game) {
    case GameId::TicTacToe: return {0.3, 0.8, 0.4};
    case GameId::Breakthrough: return {1.0, 0.6, 1.2, 0.3};
    case GameId::Othello: return {0.4, 1.5, 0.8, 0.3};
    case GameId::Hex: return {2.0, 0.3};
    case GameId::Clobber: return {1.2, 0.6};
  }
  return {};
}

namespace {

void tictactoe_features(const TicTacToe& g, std::span<double> out) {
  static constexpr int lines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                      {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  double open = 0, threats = 0;
  for (const auto& line : lines) {
    int x = 0, o = 0;
    for (int c : line) {
      x += g.at(c) == Cell::First;
      o += g.at(c) == Cell::Second;
    }
    if (o == 0 && x > 0) open += 1, threats += x == 2;
    if (x == 0 && o > 0) open -= 1, threats -= o == 2;
  }
  out[0] = open / 8.0;
  out[1] = threats / 2.0;
  out[2] = g.at(4) == Cell::First ? 1.0 : g.at(4) == Cell::Second ? -1.0 : 0.0;
}

void breakthrough_features(const Breakthrough& g, std::span<double> out) {
  const int rows = g.rows(), cols = g.cols();
  double material = 0, advance = 0;
  int best_first = 0, best_second = 0;
  int safe_first = 0, safe_second = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Cell cell = g.at(r, c);
      if (cell == Cell::First) {
        material += 1;
        advance += r;
        best_first = std::max(best_first, r);
        // Defended by a piece diagonally behind it.
        if (r > 0 && ((c > 0 && g.at(r - 1, c - 1) == Cell::First) ||
                      (c + 1 < cols && g.at(r - 1, c + 1) == Cell::First)))
          ++safe_first;
      } else if (cell == Cell::Second) {
        material -= 1;
        advance -= rows - 1 - r;
        best_second = std::max(best_second, rows - 1 - r);
        if (r + 1 < rows && ((c > 0 && g.at(r + 1, c - 1) == Cell::Second) ||
                             (c + 1 < cols && g.at(r + 1, c + 1) == Cell::Second)))
          ++safe_second;
      }
    }
  }
  out[0] = material / cols;
  out[1] = advance / (2.0 * cols * (rows - 1));
  out[2] = static_cast<double>(best_first - best_second) / (rows - 1);
  out[3] = static_cast<double>(safe_first - safe_second) / (2.0 * cols);
}

void othello_features(const Othello& g, std::span<double> out) {
  const int rows = g.rows(), cols = g.cols();
  const int cells = rows * cols;
  out[0] = static_cast<double>(g.disc_difference()) / cells;
  double corners = 0;
  for (int cell : {0, cols - 1, cells - cols, cells - 1})
    corners += g.at(cell) == Cell::First ? 1 : g.at(cell) == Cell::Second ? -1 : 0;
  out[1] = corners / 4.0;
  int mob_first = 0, mob_second = 0;
  for (int cell = 0; cell < cells; ++cell) {
    if (g.at(cell) != Cell::Empty) continue;
    mob_first += g.flips(cell, Player::First) > 0;
    mob_second += g.flips(cell, Player::Second) > 0;
  }
  out[2] = static_cast<double>(mob_first - mob_second) / (mob_first + mob_second + 1);
  double edges = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (r != 0 && r != rows - 1 && c != 0 && c != cols - 1) continue;
      const Cell cell = g.at(r, c);
      edges += cell == Cell::First ? 1 : cell == Cell::Second ? -1 : 0;
    }
  }
  out[3] = edges / (2.0 * (rows + cols));
}

// Fewest empty cells `p` still needs to connect its sides (0-1 BFS).
int hex_distance(const Hex& g, Player p) {
  const int n = g.size();
  const Cell own = stone_of(p), enemy = stone_of(opponent(p));
  constexpr int kBlocked = 1 << 20;
  std::vector<int> dist(static_cast<std::size_t>(n * n), kBlocked);
  std::deque<int> queue;
  for (int i = 0; i < n; ++i) {
    const int cell = p == Player::First ? g.index(0, i) : g.index(i, 0);
    if (g.at(cell) == enemy) continue;
    const int d = g.at(cell) == own ? 0 : 1;
    if (d < dist[cell]) {
      dist[cell] = d;
      d == 0 ? queue.push_front(cell) : queue.push_back(cell);
    }
  }
  static constexpr int nbr[6][2] = {{-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}};
  int best = kBlocked;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int r = cur / n, c = cur % n;
    if ((p == Player::First ? r : c) == n - 1) best = std::min(best, dist[cur]);
    for (const auto& d : nbr) {
      const int rr = r + d[0], cc = c + d[1];
      if (!g.inside(rr, cc)) continue;
      const int next = g.index(rr, cc);
      if (g.at(next) == enemy) continue;
      const int w = g.at(next) == own ? 0 : 1;
      if (dist[cur] + w < dist[next]) {
        dist[next] = dist[cur] + w;
        w == 0 ? queue.push_front(next) : queue.push_back(next);
      }
    }
  }
  return std::min(best, n * n);
}

void hex_features(const Hex& g, std::span<double> out) {
  const int n = g.size();
  out[0] = static_cast<double>(hex_distance(g, Player::Second) - hex_distance(g, Player::First)) / n;
  double centre = 0;
  const double mid = (n - 1) / 2.0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Cell cell = g.at(r, c);
      if (cell == Cell::Empty) continue;
      const double w = 1.0 - (std::abs(r - mid) + std::abs(c - mid)) / (2.0 * n);
      centre += cell == Cell::First ? w : -w;
    }
  }
  out[1] = centre / n;
}

void clobber_features(const Clobber& g, std::span<double> out) {
  const int first = g.mobility(Player::First), second = g.mobility(Player::Second);
  out[0] = static_cast<double>(first - second) / (first + second + 1);
  int live_first = 0, live_second = 0;
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      const Cell cell = g.at(r, c);
      if (cell == Cell::Empty) continue;
      const Cell enemy = cell == Cell::First ? Cell::Second : Cell::First;
      bool live = false;
      for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}})
        live |= g.inside(r + dr, c + dc) && g.at(r + dr, c + dc) == enemy;
      if (live) (cell == Cell::First ? live_first : live_second)++;
    }
  }
  out[1] = static_cast<double>(live_first - live_second) / (g.rows() * g.cols() / 2.0);
}

template <typename T>
const T& as(const Game& s) {
  const auto* g = dynamic_cast<const T*>(&s);
  if (!g) throw ContractViolation("evaluator applied to a different game: " + s.id());
  return *g;
}

}  // namespace

void compute_features(const GameSpec& spec, const Game& s, std::span<double> out) {
  if (out.size() != feature_count(spec.id)) throw ContractViolation("feature buffer size mismatch");
  switch (spec.id) {
    case GameId::TicTacToe: tictactoe_features(as<TicTacToe>(s), out); break;
    case GameId::Breakthrough: breakthrough_features(as<Breakthrough>(s), out); break;
    case GameId::Othello: othello_features(as<Othello>(s), out); break;
    case GameId::Hex: hex_features(as<Hex>(s), out); break;
    case GameId::Clobber: clobber_features(as<Clobber>(s), out); break;
  }
}

// ---------------------------------------------------------------- tictactoe oracle

namespace {

class TicTacToeTable {
 public:
  static const TicTacToeTable& instance() {
    static const TicTacToeTable table;
    return table;
  }

  const std::unordered_map<std::uint64_t, int>& values() const { return values_; }

 private:
  TicTacToeTable() {
    TicTacToe g;
    solve(g);
  }

  int solve(Game& g) {
    if (auto it = values_.find(g.key()); it != values_.end()) return it->second;
    int value;
    if (g.ended()) {
      value = g.terminal_value();
    } else {
      const int sign = view_sign(g.mover());
      int best = -2;
      for (Action a : g.actions()) {
        g.apply(a);
        best = std::max(best, sign * solve(g));
        g.undo();
      }
      value = sign * best;
    }
    values_.emplace(g.key(), value);
    return value;
  }

  std::unordered_map<std::uint64_t, int> values_;
};

int solve_uncached(Game& g) {
  if (g.ended()) return g.terminal_value();
  const int sign = view_sign(g.mover());
  int best = -2;
  for (Action a : g.actions()) {
    g.apply(a);
    best = std::max(best, sign * solve_uncached(g));
    g.undo();
  }
  return sign * best;
}

}  // namespace

int tictactoe_value(const Game& s) {
  const auto& table = TicTacToeTable::instance().values();
  if (auto it = table.find(s.key()); it != table.end() && s.id().starts_with("tictactoe:3x3") &&
                                     s.draw_cap() >= 9) {
    return it->second;
  }
  auto copy = s.clone();
  return solve_uncached(*copy);
}

std::size_t tictactoe_reachable_positions() { return TicTacToeTable::instance().values().size(); }

// ---------------------------------------------------------------- EvalFn

EvalFn::EvalFn(GameSpec game, Identity identity, EvalDescriptor descriptor)
    : game_(game), identity_(std::move(identity)), descriptor_(std::move(descriptor)) {
  if (descriptor_.kind == EvalDescriptor::Kind::Linear &&
      descriptor_.weights.size() != feature_count(game_.id))
    throw ConfigError("evaluator for " + game_.to_string() + " needs " +
                      std::to_string(feature_count(game_.id)) + " weights");
  if (descriptor_.kind == EvalDescriptor::Kind::Oracle && game_.id != GameId::TicTacToe)
    throw ConfigError("oracle evaluators exist for tictactoe only");
}

double EvalFn::operator()(const Game& s) const {
  if (descriptor_.kind == EvalDescriptor::Kind::Oracle) {
    const double exact = tictactoe_value(s);
    const std::uint64_t h = splitmix64(s.key() ^ descriptor_.noise_seed);
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    return std::tanh(1.5 * exact + descriptor_.noise * u);
  }
  double buffer[8];
  const std::size_t n = descriptor_.weights.size();
  compute_features(game_, s, std::span<double>(buffer, n));
  double sum = 0;
  for (std::size_t k = 0; k < n; ++k) sum += descriptor_.weights[k] * buffer[k];
  // Keep strictly inside (-1, 1) even where tanh saturates in double precision.
  return std::clamp(std::tanh(sum), -0.999999, 0.999999);
}

// ---------------------------------------------------------------- adapters

double default_terminal_score(const Game& s) { return s.terminal_value(); }

double evaluate_semicompleted(const EvalFn& f, const TerminalScorer& terminal, const Game& s) {
  return s.ended() ? terminal(s) : f(s);
}

int random_playout(Game& s, Rng& rng) {
  int played = 0;
  while (!s.ended()) {
    auto actions = s.actions();
    s.apply(actions[rng.below(actions.size())]);
    ++played;
  }
  const int value = s.terminal_value();
  while (played-- > 0) s.undo();
  return value;
}

EvalRange estimate_range(Game& start, std::size_t samples, std::uint64_t seed,
                         const TerminalScorer& terminal) {
  if (samples == 0) throw ContractViolation("estimate_range needs at least one sample");
  Rng rng(seed);
  EvalRange range{-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), samples};
  for (std::size_t i = 0; i < samples; ++i) {
    int played = 0;
    while (!start.ended()) {
      auto actions = start.actions();
      start.apply(actions[rng.below(actions.size())]);
      ++played;
    }
    const double v = terminal(start);
    range.max = std::max(range.max, v);
    range.min = std::min(range.min, v);
    while (played-- > 0) start.undo();
  }
  return range;
}

long long discretize(double value, int delta, const EvalRange& range) {
  const double scale = std::max(std::abs(range.max), std::abs(range.min));
  if (scale == 0) throw DegenerateRange("discretization range has max(|M|,|m|) = 0");
  // std::llround rounds half away from zero.
  return std::llround(delta * value / scale);
}

double normalize_unit(double value, const EvalRange& range) {
  if (range.max == range.min) throw DegenerateRange("normalization range has M = m");
  const double v = std::clamp(value, range.min, range.max);
  return (v - range.min) / (range.max - range.min);
}

double denormalize_unit(double unit, const EvalRange& range) {
  if (range.max == range.min) throw DegenerateRange("normalization range has M = m");
  return range.min + unit * (range.max - range.min);
}

SemiCompletedEval::SemiCompletedEval(EvalFn f, TerminalScorer terminal)
    : f_(std::move(f)), terminal_(std::move(terminal)) {}

double SemiCompletedEval::operator()(const Game& s) const {
  return evaluate_semicompleted(f_, terminal_, s);
}

DiscretizedEval::DiscretizedEval(std::shared_ptr<const Evaluator> base, int delta, EvalRange range)
    : base_(std::move(base)), delta_(delta), range_(range) {
  if (delta_ < 1) throw ConfigError("discretization constant must be a positive integer");
  if (std::max(std::abs(range_.max), std::abs(range_.min)) == 0)
    throw DegenerateRange("discretization range has max(|M|,|m|) = 0");
}

double DiscretizedEval::operator()(const Game& s) const {
  return static_cast<double>(discretize((*base_)(s), delta_, range_));
}

double DiscretizedEval::outcome_value(int outcome) const {
  return static_cast<double>(discretize(base_->outcome_value(outcome), delta_, range_));
}

long long discretize_value(const DiscretizedEval& d, const Game& s) {
  return static_cast<long long>(d(s));
}

double normalize_eval(const EvalFn& f, const EvalRange& range, const Game& s) {
  return normalize_unit(evaluate_semicompleted(f, default_terminal_score, s), range);
}

// ---------------------------------------------------------------- families

namespace {

double gaussian(Rng& rng) {
  double u1 = rng.unit();
  while (u1 <= 0) u1 = rng.unit();
  const double u2 = rng.unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

constexpr double kWeightSpread = 0.5;
constexpr double kOracleNoise = 0.05;

}  // namespace

EvalFamily make_heuristic_family(const GameSpec& game, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("evaluation family needs at least one member");
  EvalFamily family{game, seed, {}};
  const auto base = baseline_weights(game.id);
  for (int i = 0; i < count; ++i) {
    EvalDescriptor d;
    if (game.id == GameId::TicTacToe && i == 1) {
      d.kind = EvalDescriptor::Kind::Oracle;
      d.noise = kOracleNoise;
      d.noise_seed = derive_seed({seed, 1, 0x0dac1e});
    } else {
      d.weights = base;
      if (i > 0) {
        Rng rng(derive_seed({seed, static_cast<std::uint64_t>(i)}));
        for (double& w : d.weights) w *= std::exp(kWeightSpread * gaussian(rng));
      }
    }
    family.members.emplace_back(game, EvalFn::Identity{game.to_string(), seed, i}, std::move(d));
  }
  return family;
}

void write_family(std::ostream& out, const EvalFamily& family) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "# gsearch evaluation family\n";
  buf << "game = " << family.game.to_string() << '\n';
  buf << "seed = " << family.seed << '\n';
  buf << "count = " << family.members.size() << '\n';
  for (const auto& m : family.members) {
    const auto& d = m.descriptor();
    buf << "member = " << m.identity().member;
    if (d.kind == EvalDescriptor::Kind::Oracle) {
      buf << " oracle " << d.noise << ' ' << d.noise_seed;
    } else {
      buf << " linear";
      for (double w : d.weights) buf << ' ' << w;
    }
    buf << '\n';
  }
  out << buf.str();
}

EvalFamily read_family(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<GameSpec> game;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  bool have_count = false;
  std::vector<std::pair<int, EvalDescriptor>> members;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::istringstream vs(value);
    if (key == "game") {
      try {
        game = GameSpec::parse(value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), lineno);
      }
    } else if (key == "seed") {
      if (!(vs >> seed)) throw ConfigError("bad seed", lineno);
    } else if (key == "count") {
      if (!(vs >> count)) throw ConfigError("bad count", lineno);
      have_count = true;
    } else if (key == "member") {
      int index = 0;
      std::string kind;
      if (!(vs >> index >> kind)) throw ConfigError("bad member line", lineno);
      EvalDescriptor d;
      if (kind == "oracle") {
        d.kind = EvalDescriptor::Kind::Oracle;
        if (!(vs >> d.noise >> d.noise_seed)) throw ConfigError("bad oracle member", lineno);
      } else if (kind == "linear") {
        double w;
        while (vs >> w) d.weights.push_back(w);
        if (!vs.eof()) throw ConfigError("bad weight", lineno);
      } else {
        throw ConfigError("unknown member kind '" + kind + "'", lineno);
      }
      members.emplace_back(index, std::move(d));
    } else {
      throw ConfigError("unknown key '" + key + "'", lineno);
    }
  }
  if (!game) throw ConfigError("family file has no game");
  if (!have_count || count != members.size())
    throw ConfigError("family count does not match the member lines");
  EvalFamily family{*game, seed, {}};
  for (auto& [index, d] : members) {
    try {
      family.members.emplace_back(*game, EvalFn::Identity{game->to_string(), seed, index},
                                  std::move(d));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), 0);
    }
  }
  return family;
}

}  // namespace gsearch
