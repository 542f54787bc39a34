#include "gsearch/game.hpp"

#include <charconv>
#include <sstream>

#include "gsearch/error.hpp"
#include "gsearch/games.hpp"

namespace gsearch {

void Game::set_draw_cap(int cap) {
  if (cap < 1) throw ContractViolation("draw cap must be at least 1");
  draw_cap_ = cap;
}

int Game::terminal_value() const {
  if (natural_end()) return natural_value();
  if (ply_ >= draw_cap_) return cap_value();
  throw ContractViolation("terminal_value called on a non-terminal " + id() + " position");
}

std::vector<Action> Game::actions() const {
  std::vector<Action> out;
  if (!ended()) legal_actions(out);
  return out;
}

void Game::apply(Action a) {
  if (ended())
    throw ContractViolation("apply on an ended position: " + action_name(a));
  if (!is_legal(a)) throw ContractViolation("illegal action " + action_name(a) + " in " + id());
  do_apply(a);
  ++ply_;
  ++history_;
}

void Game::undo() {
  if (history_ == 0) throw ContractViolation("undo with an empty history");
  do_undo();
  --ply_;
  --history_;
}

std::string_view game_name(GameId id) {
  switch (id) {
    case GameId::TicTacToe: return "tictactoe";
    case GameId::Breakthrough: return "breakthrough";
    case GameId::Othello: return "othello";
    case GameId::Hex: return "hex";
    case GameId::Clobber: return "clobber";
  }
  return "?";
}

GameSpec GameSpec::defaults(GameId id) {
  switch (id) {
    case GameId::TicTacToe: return {id, 3, 3, false, 400};
    case GameId::Breakthrough: return {id, 6, 6, false, 400};
    case GameId::Othello: return {id, 8, 8, false, 400};
    case GameId::Hex: return {id, 7, 7, false, 400};
    case GameId::Clobber: return {id, 5, 6, false, 400};
  }
  return {};
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_positive(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v <= 0)
    throw ConfigError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

GameSpec GameSpec::parse(std::string_view text) {
  auto parts = split(text, ':');
  GameSpec spec;
  bool found = false;
  for (GameId id : {GameId::TicTacToe, GameId::Breakthrough, GameId::Othello, GameId::Hex,
                    GameId::Clobber}) {
    if (parts[0] == game_name(id) || (id == GameId::Othello && parts[0] == "othello8")) {
      spec = defaults(id);
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown game '" + std::string(parts[0]) + "'");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto p = parts[i];
    if (p == "swap") {
      spec.swap = true;
    } else if (p.starts_with("cap=")) {
      spec.draw_cap = parse_positive(p.substr(4), "draw cap");
    } else if (auto x = p.find('x'); x != std::string_view::npos) {
      spec.rows = parse_positive(p.substr(0, x), "board rows");
      spec.cols = parse_positive(p.substr(x + 1), "board columns");
    } else {
      throw ConfigError("bad game option '" + std::string(p) + "' in '" + std::string(text) + "'");
    }
  }
  switch (spec.id) {
    case GameId::TicTacToe:
      if (spec.rows != 3 || spec.cols != 3) throw ConfigError("tictactoe is 3x3 only");
      break;
    case GameId::Hex:
      if (spec.rows != spec.cols) throw ConfigError("hex board must be square");
      break;
    case GameId::Othello:
      if (spec.rows % 2 || spec.cols % 2 || spec.rows < 4 || spec.cols < 4)
        throw ConfigError("othello board dimensions must be even and at least 4");
      break;
    case GameId::Breakthrough:
      if (spec.rows < 5) throw ConfigError("breakthrough needs at least 5 rows");
      break;
    case GameId::Clobber: break;
  }
  if (spec.swap && spec.id != GameId::Hex) throw ConfigError("swap rule only applies to hex");
  return spec;
}

std::string GameSpec::to_string() const {
  std::string s(game_name(id));
  s += ':' + std::to_string(rows) + 'x' + std::to_string(cols);
  if (swap) s += ":swap";
  if (draw_cap != 400) s += ":cap=" + std::to_string(draw_cap);
  return s;
}

std::unique_ptr<Game> make_game(const GameSpec& spec) {
  std::unique_ptr<Game> g;
  switch (spec.id) {
    case GameId::TicTacToe: g = std::make_unique<TicTacToe>(); break;
    case GameId::Breakthrough: g = std::make_unique<Breakthrough>(spec.rows, spec.cols); break;
    case GameId::Othello: g = std::make_unique<Othello>(spec.rows, spec.cols); break;
    case GameId::Hex: g = std::make_unique<Hex>(spec.rows, spec.swap); break;
    case GameId::Clobber: g = std::make_unique<Clobber>(spec.rows, spec.cols); break;
  }
  g->set_draw_cap(spec.draw_cap);
  return g;
}

std::string format_position(const Game& g) {
  return g.id() + ' ' + g.board_string() + ' ' + (g.first_player() ? 'x' : 'o');
}

std::unique_ptr<Game> parse_position(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string spec_text, board, mover;
  if (!(in >> spec_text >> board >> mover) || (mover != "x" && mover != "o"))
    throw ConfigError("malformed position '" + std::string(line) + "'");
  auto spec = GameSpec::parse(spec_text);
  auto game = make_game(spec);
  auto* grid = dynamic_cast<GridGame*>(game.get());

  auto rows = split(board, '/');
  if (static_cast<int>(rows.size()) != spec.rows)
    throw ConfigError("position has " + std::to_string(rows.size()) + " rows, expected " +
                      std::to_string(spec.rows));
  std::vector<Cell> cells;
  for (auto row : rows) {
    if (static_cast<int>(row.size()) != spec.cols)
      throw ConfigError("position row '" + std::string(row) + "' has the wrong width");
    for (char ch : row) {
      switch (ch) {
        case '.': cells.push_back(Cell::Empty); break;
        case 'x': cells.push_back(Cell::First); break;
        case 'o': cells.push_back(Cell::Second); break;
        default: throw ConfigError(std::string("bad board character '") + ch + "'");
      }
    }
  }
  grid->load(cells, mover == "x" ? Player::First : Player::Second);
  return game;
}

}  // namespace gsearch
