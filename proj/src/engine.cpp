#include "gsearch/engine.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gsearch/bestfirst.hpp"
#include "gsearch/error.hpp"
#include "gsearch/mcts.hpp"
#include "gsearch/transposition.hpp"

namespace gsearch {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// "k=3" and "3" both give "3"; the key, if any, must be one of `keys`.
std::string param_value(const std::string& text, std::initializer_list<std::string_view> keys,
                        const std::string& spec) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return text;
  const std::string key = trim(std::string_view(text).substr(0, eq));
  for (auto k : keys)
    if (key == k) return trim(std::string_view(text).substr(eq + 1));
  throw ConfigError("unknown parameter '" + key + "' in algorithm '" + spec + "'");
}

int parse_int(const std::string& v, const std::string& spec) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError("bad integer '" + v + "' in algorithm '" + spec + "'");
  return out;
}

double parse_c(const std::string& v, const std::string& spec) {
  if (v == "sqrt2" || v == "√2") return kSqrt2;
  try {
    std::size_t used = 0;
    const double c = std::stod(v, &used);
    if (used == v.size() && std::isfinite(c) && c >= 0) return c;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad UCT constant '" + v + "' in algorithm '" + spec + "'");
}

std::string format_c(double c) {
  if (c == kSqrt2) return "sqrt2";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", c);
  return buf;
}

}  // namespace

AlgorithmSpec AlgorithmSpec::parse(std::string_view text) {
  const std::string spec = trim(text);
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const bool has_param = colon != std::string::npos;
  const std::string param = has_param ? trim(std::string_view(spec).substr(colon + 1)) : "";
  if (has_param && param.empty()) throw ConfigError("empty parameter in algorithm '" + spec + "'");

  AlgorithmSpec a;
  auto no_param = [&] {
    if (has_param) throw ConfigError("algorithm '" + name + "' takes no parameter");
  };
  if (name == "ab") {
    no_param();
    a.kind = Kind::AlphaBeta;
  } else if (name == "ab_batch") {
    no_param();
    a.kind = Kind::AlphaBetaBatch;
  } else if (name == "pvs" || name == "mtdf") {
    a.kind = name == "pvs" ? Kind::Pvs : Kind::Mtdf;
    if (has_param) a.delta = parse_int(param_value(param, {"delta", "δ", "d"}, spec), spec);
    if (a.delta < 1) throw ConfigError("discretization constant must be positive in '" + spec + "'");
  } else if (name == "kbest") {
    a.kind = Kind::Kbest;
    if (!has_param) throw ConfigError("kbest needs k, e.g. kbest:k=3");
    const std::string v = param_value(param, {"k"}, spec);
    if (v != "inf" && v != "∞") {
      a.k = parse_int(v, spec);
      if (*a.k < 1) throw ConfigError("kbest needs k >= 1 in '" + spec + "'");
    }
  } else if (name == "ubfm" || name == "ubfm_s") {
    no_param();
    a.kind = name == "ubfm" ? Kind::Ubfm : Kind::UbfmS;
  } else if (name == "mcts" || name == "mcts_h") {
    a.kind = name == "mcts" ? Kind::Mcts : Kind::MctsH;
    if (has_param) a.c = parse_c(param_value(param, {"C", "c"}, spec), spec);
  } else if (name == "random") {
    no_param();
    a.kind = Kind::Random;
  } else if (name == "oracle") {
    no_param();
    a.kind = Kind::Oracle;
  } else {
    throw ConfigError("unknown algorithm '" + name + "'");
  }
  return a;
}

std::string AlgorithmSpec::id() const {
  switch (kind) {
    case Kind::AlphaBeta: return "ab";
    case Kind::AlphaBetaBatch: return "ab_batch";
    case Kind::Pvs: return "pvs";
    case Kind::Mtdf: return "mtdf";
    case Kind::Kbest: return "kbest";
    case Kind::Ubfm: return "ubfm";
    case Kind::UbfmS: return "ubfm_s";
    case Kind::Mcts: return "mcts";
    case Kind::MctsH: return "mcts_h";
    case Kind::Random: return "random";
    case Kind::Oracle: return "oracle";
  }
  return "?";
}

std::string AlgorithmSpec::params() const {
  switch (kind) {
    case Kind::Pvs:
    case Kind::Mtdf: return "delta=" + std::to_string(delta);
    case Kind::Kbest: return k ? "k=" + std::to_string(*k) : "k=inf";
    case Kind::Mcts:
    case Kind::MctsH: return "C=" + format_c(c);
    default: return "";
  }
}

std::string AlgorithmSpec::to_string() const {
  const std::string p = params();
  return p.empty() ? id() : id() + ":" + p;
}

bool AlgorithmSpec::child_batching_default() const {
  return kind == Kind::AlphaBetaBatch || kind == Kind::Ubfm || kind == Kind::UbfmS;
}

bool AlgorithmSpec::needs_heuristic() const { return kind != Kind::Random && kind != Kind::Oracle; }

std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view text) {
  std::vector<AlgorithmSpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!piece.empty()) out.push_back(AlgorithmSpec::parse(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty algorithm list");
  return out;
}

namespace {

std::shared_ptr<const Evaluator> semicompleted(const EngineSetup& setup) {
  if (!setup.heuristic) throw ConfigError("this algorithm needs an evaluation function");
  return std::make_shared<SemiCompletedEval>(*setup.heuristic);
}

class DepthEngine final : public Engine {
 public:
  DepthEngine(const AlgorithmSpec& spec, const EngineSetup& setup)
      : kind_(spec.kind), tt_(setup.tt_entries) {
    eval_ = semicompleted(setup);
    if (kind_ == AlgorithmSpec::Kind::Pvs || kind_ == AlgorithmSpec::Kind::Mtdf)
      eval_ = std::make_shared<DiscretizedEval>(eval_, spec.delta, setup.range);
    DepthSearchOptions o;
    o.child_batching = setup.child_batching.value_or(spec.child_batching_default());
    o.batch_workers = setup.batch_workers;
    o.kbest = spec.kind == AlgorithmSpec::Kind::Kbest ? spec.k : std::nullopt;
    o.kbest_scope = setup.kbest_scope;
    o.solver = setup.solver;
    search_ = std::make_unique<DepthSearch>(*eval_, tt_, o);
  }

  Action choose(Game& s, const SearchBudget& budget) override {
    search_->reset_counters();
    if (kind_ == AlgorithmSpec::Kind::Mtdf)
      last_ = search_->iterative_deepening_mtdf(s, budget);
    else
      last_ = search_->iterative_deepening(
          s, budget,
          kind_ == AlgorithmSpec::Kind::Pvs ? DepthSearch::Mode::Pvs : DepthSearch::Mode::AlphaBeta);
    return last_.action;
  }

 private:
  AlgorithmSpec::Kind kind_;
  std::shared_ptr<const Evaluator> eval_;
  TranspositionTable tt_;
  std::unique_ptr<DepthSearch> search_;
};

class BestFirstEngine final : public Engine {
 public:
  BestFirstEngine(const AlgorithmSpec& spec, const EngineSetup& setup)
      : decision_(spec.kind == AlgorithmSpec::Kind::UbfmS ? Decision::Safest : Decision::BestValue),
        eval_(semicompleted(setup)),
        tt_(setup.tt_entries) {
    BestFirstOptions o;
    o.child_batching = setup.child_batching.value_or(spec.child_batching_default());
    o.batch_workers = setup.batch_workers;
    o.solver = setup.solver;
    o.count_expansion = setup.count_expansion;
    o.tie_seed = setup.seed;
    search_ = std::make_unique<BestFirstSearch>(*eval_, tt_, o);
  }

  Action choose(Game& s, const SearchBudget& budget) override {
    last_ = search_->search(s, budget, decision_);
    return last_.action;
  }

 private:
  Decision decision_;
  std::shared_ptr<const Evaluator> eval_;
  TranspositionTable tt_;
  std::unique_ptr<BestFirstSearch> search_;
};

class MctsEngine final : public Engine {
 public:
  MctsEngine(const AlgorithmSpec& spec, const EngineSetup& setup) : tt_(setup.tt_entries) {
    MctsOptions o;
    o.c = spec.c;
    o.seed = setup.seed;
    o.solver = setup.solver;
    if (spec.kind == AlgorithmSpec::Kind::MctsH) {
      o.rollout = Rollout::Heuristic;
      eval_ = semicompleted(setup);
    }
    search_ = std::make_unique<MonteCarloSearch>(tt_, o, eval_.get(), setup.range);
  }

  Action choose(Game& s, const SearchBudget& budget) override {
    last_ = search_->search(s, budget);
    return last_.action;
  }

 private:
  std::shared_ptr<const Evaluator> eval_;
  TranspositionTable tt_;
  std::unique_ptr<MonteCarloSearch> search_;
};

class RandomEngine final : public Engine {
 public:
  explicit RandomEngine(std::uint64_t seed) : rng_(seed) {}
  Action choose(Game& s, const SearchBudget&) override {
    const auto actions = s.actions();
    last_ = {};
    last_.action = actions[rng_.below(actions.size())];
    return last_.action;
  }

 private:
  Rng rng_;
};

// Exact tictactoe player; picks uniformly among the optimal moves.
class OracleEngine final : public Engine {
 public:
  OracleEngine(const EngineSetup& setup) : rng_(setup.seed) {
    if (setup.game.id != GameId::TicTacToe) throw ConfigError("the oracle engine only plays tictactoe");
  }
  Action choose(Game& s, const SearchBudget&) override {
    const int sign = view_sign(s.mover());
    int best = -2;
    std::vector<Action> optimal;
    for (Action a : s.actions()) {
      s.apply(a);
      const int v = sign * tictactoe_value(s);
      s.undo();
      if (v > best) {
        best = v;
        optimal.clear();
      }
      if (v == best) optimal.push_back(a);
    }
    last_ = {};
    last_.action = optimal[rng_.below(optimal.size())];
    last_.value = sign * best;
    last_.resolution = Resolution::solved(sign * best);
    return last_.action;
  }

 private:
  Rng rng_;
};

}  // namespace

std::unique_ptr<Engine> make_engine(const AlgorithmSpec& spec, const EngineSetup& setup) {
  using K = AlgorithmSpec::Kind;
  switch (spec.kind) {
    case K::AlphaBeta:
    case K::AlphaBetaBatch:
    case K::Pvs:
    case K::Mtdf:
    case K::Kbest: return std::make_unique<DepthEngine>(spec, setup);
    case K::Ubfm:
    case K::UbfmS: return std::make_unique<BestFirstEngine>(spec, setup);
    case K::Mcts:
    case K::MctsH: return std::make_unique<MctsEngine>(spec, setup);
    case K::Random: return std::make_unique<RandomEngine>(setup.seed);
    case K::Oracle: return std::make_unique<OracleEngine>(setup);
  }
  throw ConfigError("unknown algorithm kind");
}

}  // namespace gsearch
