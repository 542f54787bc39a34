#pragma once

#include <cstdint>
#include <vector>

#include "gsearch/game.hpp"

namespace gsearch {

/// Cell contents for the grid games.
enum class Cell : std::int8_t { Empty = 0, First = 1, Second = 2 };

constexpr Cell stone_of(Player p) noexcept {
  return p == Player::First ? Cell::First : Cell::Second;
}

/// Shared board storage, side to move and Zobrist key for the grid games.
class GridGame : public Game {
 public:
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  Cell at(int r, int c) const { return cells_[index(r, c)]; }
  Cell at(int cell) const { return cells_[cell]; }
  int index(int r, int c) const noexcept { return r * cols_ + c; }
  bool inside(int r, int c) const noexcept {
    return r >= 0 && r < rows_ && c >= 0 && c < cols_;
  }
  int count(Cell c) const;

  Player mover() const override { return mover_; }
  std::uint64_t key() const override { return key_; }
  std::string board_string() const override;

  /// Replaces the whole position (used by the notation parser).
  void load(const std::vector<Cell>& cells, Player mover);

 protected:
  GridGame(std::uint64_t tag, int rows, int cols);

  virtual void on_load() {}

  void set(int cell, Cell value);
  void pass_turn();

  std::string cell_name(int cell) const;

  std::uint64_t tag_;
  int rows_;
  int cols_;
  std::vector<Cell> cells_;
  Player mover_ = Player::First;
  std::uint64_t key_ = 0;
};

class TicTacToe final : public GridGame {
 public:
  TicTacToe();

  std::unique_ptr<Game> clone() const override;
  std::string id() const override;
  std::string action_name(Action a) const override;

  /// Player owning a completed line, if any.
  Cell line_owner() const;

 protected:
  bool natural_end() const override;
  int natural_value() const override;
  void legal_actions(std::vector<Action>& out) const override;
  bool is_legal(Action a) const override;
  void do_apply(Action a) override;
  void do_undo() override;

 private:
  std::vector<int> played_;
};

/// Pieces move one row forward, straight onto an empty square or diagonally
/// onto an empty or enemy square (capture). First starts on rows 0-1 and runs
/// toward the last row; Second mirrors it. Reaching the far row wins; a player
/// with no move loses. Action code = from * 3 + dir, dir 0/1/2 = toward lower
/// column / straight / toward higher column.
class Breakthrough final : public GridGame {
 public:
  Breakthrough(int rows = 6, int cols = 6);

  std::unique_ptr<Game> clone() const override;
  std::string id() const override;
  std::string action_name(Action a) const override;

  static Action encode(int from, int dir) { return {static_cast<std::uint32_t>(from * 3 + dir)}; }
  int forward(Player p) const noexcept { return p == Player::First ? 1 : -1; }

 protected:
  bool natural_end() const override;
  int natural_value() const override;
  int cap_value() const override;
  void legal_actions(std::vector<Action>& out) const override;
  bool is_legal(Action a) const override;
  void do_apply(Action a) override;
  void do_undo() override;

 private:
  struct Frame {
    int from;
    int to;
    Cell captured;
  };
  bool target(Action a, int& from, int& to) const;
  bool has_move(Player p) const;
  Cell goal_owner() const;

  std::vector<Frame> frames_;
};

/// Placing a stone flips every straight run of enemy stones bracketed by the
/// new stone and an existing friendly stone. A player without a placement
/// passes (explicit pass action); the game ends when neither player can
/// place. Action code = cell, pass = rows * cols.
class Othello final : public GridGame {
 public:
  Othello(int rows = 8, int cols = 8);

  std::unique_ptr<Game> clone() const override;
  std::string id() const override;
  std::string action_name(Action a) const override;

  Action pass_action() const { return {static_cast<std::uint32_t>(rows_ * cols_)}; }
  int disc_difference() const { return count(Cell::First) - count(Cell::Second); }
  /// Number of stones a placement by `p` on `cell` would flip (0 = illegal).
  int flips(int cell, Player p) const;
  bool can_place(Player p) const;

 protected:
  bool natural_end() const override;
  int natural_value() const override;
  int cap_value() const override;
  void legal_actions(std::vector<Action>& out) const override;
  bool is_legal(Action a) const override;
  void do_apply(Action a) override;
  void do_undo() override;

 private:
  struct Frame {
    int cell;  // -1 for a pass
    std::vector<int> flipped;
  };
  std::vector<Frame> frames_;
};

/// n x n rhombus. First connects row 0 to row n-1, Second connects column 0 to
/// column n-1. With the swap rule on, Second's first action may be the swap
/// action (code n * n): the lone first stone at (r, c) is replaced by a
/// Second stone at (c, r) and First moves next.
class Hex final : public GridGame {
 public:
  explicit Hex(int size = 7, bool swap = false);

  std::unique_ptr<Game> clone() const override;
  std::string id() const override;
  std::string action_name(Action a) const override;

  int size() const noexcept { return rows_; }
  bool swap_rule() const noexcept { return swap_; }
  Action swap_action() const { return {static_cast<std::uint32_t>(rows_ * rows_)}; }
  /// Player whose stones connect their two sides, or Empty.
  Cell winner() const { return winner_; }
  /// Full connection scan, independent of the incremental winner cache.
  bool connected(Player p) const;
  void refresh_winner();

 protected:
  bool natural_end() const override;
  int natural_value() const override;
  void legal_actions(std::vector<Action>& out) const override;
  bool is_legal(Action a) const override;
  void do_apply(Action a) override;
  void do_undo() override;

 private:
  void on_load() override;
  bool swap_available() const;
  bool touches_both_sides(int cell, Player p) const;

  struct Frame {
    int cell;
    bool swapped;
  };
  bool swap_;
  Cell winner_ = Cell::Empty;
  int stones_ = 0;
  std::vector<Frame> frames_;
};

/// Checkerboard fill; a move takes an orthogonally adjacent enemy stone by
/// moving onto it. The player to move with no capture loses. Action code =
/// from * 4 + dir, dir 0/1/2/3 = up/left/right/down.
class Clobber final : public GridGame {
 public:
  Clobber(int rows = 5, int cols = 6);

  std::unique_ptr<Game> clone() const override;
  std::string id() const override;
  std::string action_name(Action a) const override;

  static Action encode(int from, int dir) { return {static_cast<std::uint32_t>(from * 4 + dir)}; }
  int mobility(Player p) const;

 protected:
  bool natural_end() const override;
  int natural_value() const override;
  void legal_actions(std::vector<Action>& out) const override;
  bool is_legal(Action a) const override;
  void do_apply(Action a) override;
  void do_undo() override;

 private:
  bool target(Action a, int& from, int& to) const;
  bool has_move(Player p) const;

  std::vector<std::pair<int, int>> frames_;
};

/// Seeded synthetic game tree used by the exactness corpus. Every node carries
/// an integer value in [-100, 100]: the exact score at leaves and a heuristic
/// estimate at interior nodes. Leaves are ended states whose terminal value is
/// the sign of their score.
class RandomTree final : public Game {
 public:
  RandomTree(std::uint64_t seed, int max_branching = 5, int max_depth = 5);

  std::unique_ptr<Game> clone() const override;
  std::string id() const override;
  Player mover() const override;
  std::uint64_t key() const override;
  std::string action_name(Action a) const override;
  std::string board_string() const override;

  int node_value() const;
  int depth() const noexcept { return static_cast<int>(path_.size()) - 1; }
  int branching() const;
  int max_depth() const noexcept { return max_depth_; }

 protected:
  bool natural_end() const override;
  int natural_value() const override;
  void legal_actions(std::vector<Action>& out) const override;
  bool is_legal(Action a) const override;
  void do_apply(Action a) override;
  void do_undo() override;

 private:
  std::uint64_t seed_;
  int max_branching_;
  int max_depth_;
  std::vector<std::uint64_t> path_;
};

}  // namespace gsearch
