#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gsearch {

enum class Player : std::uint8_t { First, Second };

constexpr Player opponent(Player p) noexcept {
  return p == Player::First ? Player::Second : Player::First;
}

/// +1 for First, -1 for Second: converts first-player-view values to the
/// mover's view and back.
constexpr int view_sign(Player p) noexcept { return p == Player::First ? 1 : -1; }

/// Relative value: a first-player-view value seen by the player to move.
constexpr double relative_value(double first_player_value, Player mover) noexcept {
  return mover == Player::First ? first_player_value : -first_player_value;
}

/// Game-specific move descriptor. Codes are ordered so that ascending code is
/// the canonical action order of every state.
struct Action {
  std::uint32_t code = 0;

  friend constexpr auto operator<=>(const Action&, const Action&) = default;
};

/// Two-player zero-sum perfect-information game with in-place apply/undo.
///
/// The base class owns the ply counter and the draw cap. A position whose ply
/// reaches the cap is ended; `terminal_value` then falls back to
/// `cap_value()`, which defaults to a draw.
class Game {
 public:
  virtual ~Game() = default;

  virtual std::unique_ptr<Game> clone() const = 0;

  /// Spec string of the game, e.g. "hex:7x7" or "breakthrough:6x6".
  virtual std::string id() const = 0;

  virtual Player mover() const = 0;
  bool first_player() const { return mover() == Player::First; }

  int ply() const noexcept { return ply_; }
  int draw_cap() const noexcept { return draw_cap_; }
  void set_draw_cap(int cap);
  std::size_t history_size() const noexcept { return history_; }

  bool ended() const { return ply_ >= draw_cap_ || natural_end(); }

  /// {-1, 0, +1} from the first player's point of view. Throws
  /// ContractViolation on a live position.
  int terminal_value() const;

  /// Legal actions in canonical (ascending code) order; empty once ended.
  std::vector<Action> actions() const;

  /// Throws ContractViolation when `a` is not legal here.
  void apply(Action a);

  /// Throws ContractViolation on an empty history.
  void undo();

  /// 64-bit position key (board and side to move).
  virtual std::uint64_t key() const = 0;

  virtual std::string action_name(Action a) const = 0;

  /// Board part of the one-line position notation.
  virtual std::string board_string() const = 0;

 protected:
  Game() = default;
  Game(const Game&) = default;
  Game& operator=(const Game&) = default;

  virtual bool natural_end() const = 0;
  virtual int natural_value() const = 0;
  virtual int cap_value() const { return 0; }
  virtual void legal_actions(std::vector<Action>& out) const = 0;
  virtual bool is_legal(Action a) const = 0;
  virtual void do_apply(Action a) = 0;
  virtual void do_undo() = 0;

 private:
  int ply_ = 0;
  int draw_cap_ = 400;
  std::size_t history_ = 0;
};

enum class GameId { TicTacToe, Breakthrough, Othello, Hex, Clobber };

std::string_view game_name(GameId id);

/// Game construction parameters. String form: `name[:RxC][:swap][:cap=N]`,
/// e.g. "hex:7x7:swap" or "othello:8x8:cap=200".
struct GameSpec {
  GameId id = GameId::TicTacToe;
  int rows = 3;
  int cols = 3;
  bool swap = false;
  int draw_cap = 400;

  static GameSpec defaults(GameId id);
  static GameSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

std::unique_ptr<Game> make_game(const GameSpec& spec);

/// One-line position notation: `<game spec> <board> <mover>`. The board lists
/// rows from row 0 separated by '/', with '.' empty, 'x' first player and 'o'
/// second player; the mover is 'x' or 'o'.
std::string format_position(const Game& g);
std::unique_ptr<Game> parse_position(std::string_view line);

}  // namespace gsearch
