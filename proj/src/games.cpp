#include "gsearch/games.hpp"

#include <algorithm>
#include <array>

#include "gsearch/error.hpp"
#include "gsearch/rng.hpp"

namespace gsearch {

namespace {

std::uint64_t zobrist(std::uint64_t tag, int cell, Cell piece) {
  return derive_seed({tag, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(piece)});
}

std::uint64_t side_key(std::uint64_t tag) { return derive_seed({tag, 0x5eedULL}); }

constexpr std::uint64_t kTicTacToeTag = 0x7177;
constexpr std::uint64_t kBreakthroughTag = 0xb7;
constexpr std::uint64_t kOthelloTag = 0x07e1;
constexpr std::uint64_t kHexTag = 0x4e8;
constexpr std::uint64_t kClobberTag = 0xc10b;

std::string dims(int rows, int cols) { return std::to_string(rows) + 'x' + std::to_string(cols); }

}  // namespace

// ---------------------------------------------------------------- GridGame

GridGame::GridGame(std::uint64_t tag, int rows, int cols)
    : tag_(derive_seed({tag, static_cast<std::uint64_t>(rows), static_cast<std::uint64_t>(cols)})),
      rows_(rows),
      cols_(cols),
      cells_(static_cast<std::size_t>(rows * cols), Cell::Empty) {
  if (rows <= 0 || cols <= 0) throw ContractViolation("board dimensions must be positive");
}

int GridGame::count(Cell c) const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), c));
}

void GridGame::set(int cell, Cell value) {
  Cell& slot = cells_[cell];
  if (slot != Cell::Empty) key_ ^= zobrist(tag_, cell, slot);
  slot = value;
  if (slot != Cell::Empty) key_ ^= zobrist(tag_, cell, slot);
}

void GridGame::pass_turn() {
  mover_ = opponent(mover_);
  key_ ^= side_key(tag_);
}

void GridGame::load(const std::vector<Cell>& cells, Player mover) {
  if (cells.size() != cells_.size()) throw ContractViolation("board size mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) set(static_cast<int>(i), cells[i]);
  if (mover != mover_) pass_turn();
  on_load();
}

std::string GridGame::board_string() const {
  std::string out;
  for (int r = 0; r < rows_; ++r) {
    if (r) out += '/';
    for (int c = 0; c < cols_; ++c) {
      switch (at(r, c)) {
        case Cell::Empty: out += '.'; break;
        case Cell::First: out += 'x'; break;
        case Cell::Second: out += 'o'; break;
      }
    }
  }
  return out;
}

std::string GridGame::cell_name(int cell) const {
  const int r = cell / cols_;
  const int c = cell % cols_;
  std::string s(1, static_cast<char>('a' + c));
  return s + std::to_string(r + 1);
}

// ---------------------------------------------------------------- TicTacToe

namespace {
constexpr std::array<std::array<int, 3>, 8> kLines{{{0, 1, 2},
                                                    {3, 4, 5},
                                                    {6, 7, 8},
                                                    {0, 3, 6},
                                                    {1, 4, 7},
                                                    {2, 5, 8},
                                                    {0, 4, 8},
                                                    {2, 4, 6}}};
}

TicTacToe::TicTacToe() : GridGame(kTicTacToeTag, 3, 3) {}

std::unique_ptr<Game> TicTacToe::clone() const { return std::make_unique<TicTacToe>(*this); }

std::string TicTacToe::id() const {
  return draw_cap() == 400 ? "tictactoe:3x3" : "tictactoe:3x3:cap=" + std::to_string(draw_cap());
}

std::string TicTacToe::action_name(Action a) const { return cell_name(static_cast<int>(a.code)); }

Cell TicTacToe::line_owner() const {
  for (const auto& line : kLines) {
    const Cell c = cells_[line[0]];
    if (c != Cell::Empty && c == cells_[line[1]] && c == cells_[line[2]]) return c;
  }
  return Cell::Empty;
}

bool TicTacToe::natural_end() const {
  return line_owner() != Cell::Empty || count(Cell::Empty) == 0;
}

int TicTacToe::natural_value() const {
  switch (line_owner()) {
    case Cell::First: return 1;
    case Cell::Second: return -1;
    default: return 0;
  }
}

void TicTacToe::legal_actions(std::vector<Action>& out) const {
  for (int i = 0; i < 9; ++i)
    if (cells_[i] == Cell::Empty) out.push_back({static_cast<std::uint32_t>(i)});
}

bool TicTacToe::is_legal(Action a) const { return a.code < 9 && cells_[a.code] == Cell::Empty; }

void TicTacToe::do_apply(Action a) {
  set(static_cast<int>(a.code), stone_of(mover_));
  played_.push_back(static_cast<int>(a.code));
  pass_turn();
}

void TicTacToe::do_undo() {
  set(played_.back(), Cell::Empty);
  played_.pop_back();
  pass_turn();
}

// ---------------------------------------------------------------- Breakthrough

Breakthrough::Breakthrough(int rows, int cols) : GridGame(kBreakthroughTag, rows, cols) {
  for (int c = 0; c < cols; ++c) {
    set(index(0, c), Cell::First);
    set(index(1, c), Cell::First);
    set(index(rows - 1, c), Cell::Second);
    set(index(rows - 2, c), Cell::Second);
  }
}

std::unique_ptr<Game> Breakthrough::clone() const { return std::make_unique<Breakthrough>(*this); }

std::string Breakthrough::id() const {
  std::string s = "breakthrough:" + dims(rows_, cols_);
  if (draw_cap() != 400) s += ":cap=" + std::to_string(draw_cap());
  return s;
}

std::string Breakthrough::action_name(Action a) const {
  int from = 0, to = 0;
  const int f = static_cast<int>(a.code / 3);
  const int dir = static_cast<int>(a.code % 3);
  if (!target(a, from, to)) {
    // Illegal for the current mover: still name it by geometry.
    return cell_name(f) + "?" + std::to_string(dir);
  }
  return cell_name(from) + (dir == 1 ? "-" : "x") + cell_name(to);
}

bool Breakthrough::target(Action a, int& from, int& to) const {
  from = static_cast<int>(a.code / 3);
  const int dir = static_cast<int>(a.code % 3) - 1;
  if (from >= rows_ * cols_) return false;
  const int r = from / cols_ + forward(mover_);
  const int c = from % cols_ + dir;
  if (!inside(r, c)) return false;
  to = index(r, c);
  return true;
}

bool Breakthrough::is_legal(Action a) const {
  int from = 0, to = 0;
  if (!target(a, from, to)) return false;
  const Cell own = stone_of(mover_);
  if (cells_[from] != own) return false;
  const bool straight = a.code % 3 == 1;
  return straight ? cells_[to] == Cell::Empty : cells_[to] != own;
}

void Breakthrough::legal_actions(std::vector<Action>& out) const {
  const Cell own = stone_of(mover_);
  for (int from = 0; from < rows_ * cols_; ++from) {
    if (cells_[from] != own) continue;
    for (int dir = 0; dir < 3; ++dir) {
      const Action a = encode(from, dir);
      if (is_legal(a)) out.push_back(a);
    }
  }
}

bool Breakthrough::has_move(Player p) const {
  const Cell own = stone_of(p);
  const int fwd = forward(p);
  for (int from = 0; from < rows_ * cols_; ++from) {
    if (cells_[from] != own) continue;
    const int r = from / cols_ + fwd;
    const int c = from % cols_;
    if (r < 0 || r >= rows_) continue;
    for (int dc = -1; dc <= 1; ++dc) {
      if (c + dc < 0 || c + dc >= cols_) continue;
      const Cell t = cells_[index(r, c + dc)];
      if (dc == 0 ? t == Cell::Empty : t != own) return true;
    }
  }
  return false;
}

Cell Breakthrough::goal_owner() const {
  for (int c = 0; c < cols_; ++c) {
    if (at(rows_ - 1, c) == Cell::First) return Cell::First;
    if (at(0, c) == Cell::Second) return Cell::Second;
  }
  return Cell::Empty;
}

bool Breakthrough::natural_end() const {
  return goal_owner() != Cell::Empty || !has_move(mover_);
}

int Breakthrough::natural_value() const {
  switch (goal_owner()) {
    case Cell::First: return 1;
    case Cell::Second: return -1;
    default: return -view_sign(mover_);
  }
}

int Breakthrough::cap_value() const {
  const int diff = count(Cell::First) - count(Cell::Second);
  return (diff > 0) - (diff < 0);
}

void Breakthrough::do_apply(Action a) {
  Frame f{};
  target(a, f.from, f.to);
  f.captured = cells_[f.to];
  set(f.to, cells_[f.from]);
  set(f.from, Cell::Empty);
  frames_.push_back(f);
  pass_turn();
}

void Breakthrough::do_undo() {
  const Frame f = frames_.back();
  frames_.pop_back();
  pass_turn();
  set(f.from, cells_[f.to]);
  set(f.to, f.captured);
}

// ---------------------------------------------------------------- Othello

namespace {
constexpr std::array<std::pair<int, int>, 8> kRays{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
}

Othello::Othello(int rows, int cols) : GridGame(kOthelloTag, rows, cols) {
  const int r = rows / 2 - 1;
  const int c = cols / 2 - 1;
  set(index(r, c), Cell::Second);
  set(index(r, c + 1), Cell::First);
  set(index(r + 1, c), Cell::First);
  set(index(r + 1, c + 1), Cell::Second);
}

std::unique_ptr<Game> Othello::clone() const { return std::make_unique<Othello>(*this); }

std::string Othello::id() const {
  std::string s = "othello:" + dims(rows_, cols_);
  if (draw_cap() != 400) s += ":cap=" + std::to_string(draw_cap());
  return s;
}

std::string Othello::action_name(Action a) const {
  if (a == pass_action()) return "pass";
  return cell_name(static_cast<int>(a.code));
}

int Othello::flips(int cell, Player p) const {
  if (cells_[cell] != Cell::Empty) return 0;
  const Cell own = stone_of(p);
  const Cell enemy = stone_of(opponent(p));
  const int r0 = cell / cols_;
  const int c0 = cell % cols_;
  int total = 0;
  for (auto [dr, dc] : kRays) {
    int r = r0 + dr, c = c0 + dc, run = 0;
    while (inside(r, c) && at(r, c) == enemy) {
      ++run;
      r += dr;
      c += dc;
    }
    if (run > 0 && inside(r, c) && at(r, c) == own) total += run;
  }
  return total;
}

bool Othello::can_place(Player p) const {
  for (int cell = 0; cell < rows_ * cols_; ++cell)
    if (flips(cell, p) > 0) return true;
  return false;
}

bool Othello::natural_end() const { return !can_place(mover_) && !can_place(opponent(mover_)); }

int Othello::natural_value() const {
  const int d = disc_difference();
  return (d > 0) - (d < 0);
}

int Othello::cap_value() const { return natural_value(); }

void Othello::legal_actions(std::vector<Action>& out) const {
  for (int cell = 0; cell < rows_ * cols_; ++cell)
    if (flips(cell, mover_) > 0) out.push_back({static_cast<std::uint32_t>(cell)});
  if (out.empty()) out.push_back(pass_action());
}

bool Othello::is_legal(Action a) const {
  if (a == pass_action()) return !can_place(mover_);
  return a.code < static_cast<std::uint32_t>(rows_ * cols_) &&
         flips(static_cast<int>(a.code), mover_) > 0;
}

void Othello::do_apply(Action a) {
  Frame f{-1, {}};
  if (a != pass_action()) {
    f.cell = static_cast<int>(a.code);
    const Cell own = stone_of(mover_);
    const Cell enemy = stone_of(opponent(mover_));
    const int r0 = f.cell / cols_;
    const int c0 = f.cell % cols_;
    for (auto [dr, dc] : kRays) {
      int r = r0 + dr, c = c0 + dc, run = 0;
      while (inside(r, c) && at(r, c) == enemy) {
        ++run;
        r += dr;
        c += dc;
      }
      if (run == 0 || !inside(r, c) || at(r, c) != own) continue;
      for (int k = 1; k <= run; ++k) {
        const int cell = index(r0 + k * dr, c0 + k * dc);
        set(cell, own);
        f.flipped.push_back(cell);
      }
    }
    set(f.cell, own);
  }
  frames_.push_back(std::move(f));
  pass_turn();
}

void Othello::do_undo() {
  Frame f = std::move(frames_.back());
  frames_.pop_back();
  pass_turn();
  if (f.cell < 0) return;
  const Cell enemy = stone_of(opponent(mover_));
  for (int cell : f.flipped) set(cell, enemy);
  set(f.cell, Cell::Empty);
}

// ---------------------------------------------------------------- Hex

Hex::Hex(int size, bool swap) : GridGame(kHexTag, size, size), swap_(swap) {}

std::unique_ptr<Game> Hex::clone() const { return std::make_unique<Hex>(*this); }

std::string Hex::id() const {
  std::string s = "hex:" + dims(rows_, cols_);
  if (swap_) s += ":swap";
  if (draw_cap() != 400) s += ":cap=" + std::to_string(draw_cap());
  return s;
}

std::string Hex::action_name(Action a) const {
  if (a == swap_action()) return "swap";
  return cell_name(static_cast<int>(a.code));
}

namespace {
constexpr std::array<std::pair<int, int>, 6> kHexNeighbours{
    {{-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}}};
}

bool Hex::touches_both_sides(int cell, Player p) const {
  const Cell own = stone_of(p);
  const int n = rows_;
  std::vector<char> seen(cells_.size(), 0);
  std::vector<int> stack{cell};
  seen[cell] = 1;
  bool low = false, high = false;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    const int r = cur / n, c = cur % n;
    const int along = p == Player::First ? r : c;
    low |= along == 0;
    high |= along == n - 1;
    if (low && high) return true;
    for (auto [dr, dc] : kHexNeighbours) {
      const int rr = r + dr, cc = c + dc;
      if (!inside(rr, cc)) continue;
      const int next = index(rr, cc);
      if (!seen[next] && cells_[next] == own) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return false;
}

bool Hex::connected(Player p) const {
  const int n = rows_;
  for (int i = 0; i < n; ++i) {
    const int cell = p == Player::First ? index(0, i) : index(i, 0);
    if (cells_[cell] == stone_of(p) && touches_both_sides(cell, p)) return true;
  }
  return false;
}

void Hex::refresh_winner() {
  winner_ = connected(Player::First) ? Cell::First
            : connected(Player::Second) ? Cell::Second
                                        : Cell::Empty;
}

void Hex::on_load() {
  stones_ = count(Cell::First) + count(Cell::Second);
  refresh_winner();
}

bool Hex::swap_available() const {
  return swap_ && mover_ == Player::Second && stones_ == 1 && count(Cell::First) == 1;
}

bool Hex::natural_end() const { return winner_ != Cell::Empty; }

int Hex::natural_value() const { return winner_ == Cell::First ? 1 : -1; }

void Hex::legal_actions(std::vector<Action>& out) const {
  for (int cell = 0; cell < rows_ * cols_; ++cell)
    if (cells_[cell] == Cell::Empty) out.push_back({static_cast<std::uint32_t>(cell)});
  if (swap_available()) out.push_back(swap_action());
}

bool Hex::is_legal(Action a) const {
  if (a == swap_action()) return swap_available();
  return a.code < static_cast<std::uint32_t>(rows_ * cols_) && cells_[a.code] == Cell::Empty;
}

void Hex::do_apply(Action a) {
  if (a == swap_action()) {
    const int cell = static_cast<int>(std::find(cells_.begin(), cells_.end(), Cell::First) -
                                      cells_.begin());
    const int r = cell / cols_, c = cell % cols_;
    set(cell, Cell::Empty);
    set(index(c, r), Cell::Second);
    frames_.push_back({cell, true});
    pass_turn();
    return;
  }
  const int cell = static_cast<int>(a.code);
  set(cell, stone_of(mover_));
  ++stones_;
  if (touches_both_sides(cell, mover_)) winner_ = stone_of(mover_);
  frames_.push_back({cell, false});
  pass_turn();
}

void Hex::do_undo() {
  const Frame f = frames_.back();
  frames_.pop_back();
  pass_turn();
  if (f.swapped) {
    const int r = f.cell / cols_, c = f.cell % cols_;
    set(index(c, r), Cell::Empty);
    set(f.cell, Cell::First);
    return;
  }
  set(f.cell, Cell::Empty);
  --stones_;
  winner_ = Cell::Empty;
}

// ---------------------------------------------------------------- Clobber

namespace {
constexpr std::array<std::pair<int, int>, 4> kOrthogonal{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
}

Clobber::Clobber(int rows, int cols) : GridGame(kClobberTag, rows, cols) {
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) set(index(r, c), (r + c) % 2 == 0 ? Cell::First : Cell::Second);
}

std::unique_ptr<Game> Clobber::clone() const { return std::make_unique<Clobber>(*this); }

std::string Clobber::id() const {
  std::string s = "clobber:" + dims(rows_, cols_);
  if (draw_cap() != 400) s += ":cap=" + std::to_string(draw_cap());
  return s;
}

std::string Clobber::action_name(Action a) const {
  const int from = static_cast<int>(a.code / 4);
  const auto [dr, dc] = kOrthogonal[a.code % 4];
  const int r = from / cols_ + dr, c = from % cols_ + dc;
  if (from >= rows_ * cols_ || !inside(r, c)) return cell_name(from % (rows_ * cols_)) + "?";
  return cell_name(from) + "x" + cell_name(index(r, c));
}

bool Clobber::target(Action a, int& from, int& to) const {
  from = static_cast<int>(a.code / 4);
  if (from >= rows_ * cols_) return false;
  const auto [dr, dc] = kOrthogonal[a.code % 4];
  const int r = from / cols_ + dr, c = from % cols_ + dc;
  if (!inside(r, c)) return false;
  to = index(r, c);
  return true;
}

bool Clobber::is_legal(Action a) const {
  int from = 0, to = 0;
  if (!target(a, from, to)) return false;
  return cells_[from] == stone_of(mover_) && cells_[to] == stone_of(opponent(mover_));
}

void Clobber::legal_actions(std::vector<Action>& out) const {
  for (int from = 0; from < rows_ * cols_; ++from) {
    if (cells_[from] != stone_of(mover_)) continue;
    for (int dir = 0; dir < 4; ++dir) {
      const Action a = encode(from, dir);
      if (is_legal(a)) out.push_back(a);
    }
  }
}

int Clobber::mobility(Player p) const {
  int moves = 0;
  const Cell own = stone_of(p), enemy = stone_of(opponent(p));
  for (int from = 0; from < rows_ * cols_; ++from) {
    if (cells_[from] != own) continue;
    const int r = from / cols_, c = from % cols_;
    for (auto [dr, dc] : kOrthogonal)
      if (inside(r + dr, c + dc) && at(r + dr, c + dc) == enemy) ++moves;
  }
  return moves;
}

bool Clobber::has_move(Player p) const {
  const Cell own = stone_of(p), enemy = stone_of(opponent(p));
  for (int from = 0; from < rows_ * cols_; ++from) {
    if (cells_[from] != own) continue;
    const int r = from / cols_, c = from % cols_;
    for (auto [dr, dc] : kOrthogonal)
      if (inside(r + dr, c + dc) && at(r + dr, c + dc) == enemy) return true;
  }
  return false;
}

bool Clobber::natural_end() const { return !has_move(mover_); }

int Clobber::natural_value() const { return -view_sign(mover_); }

void Clobber::do_apply(Action a) {
  int from = 0, to = 0;
  target(a, from, to);
  set(to, cells_[from]);
  set(from, Cell::Empty);
  frames_.emplace_back(from, to);
  pass_turn();
}

void Clobber::do_undo() {
  const auto [from, to] = frames_.back();
  frames_.pop_back();
  pass_turn();
  set(from, stone_of(mover_));
  set(to, stone_of(opponent(mover_)));
}

// ---------------------------------------------------------------- RandomTree

namespace {
std::uint64_t child_hash(std::uint64_t parent, std::uint32_t i) {
  return splitmix64(parent ^ splitmix64(0xc41dULL + i));
}
}  // namespace

RandomTree::RandomTree(std::uint64_t seed, int max_branching, int max_depth)
    : seed_(seed), max_branching_(max_branching), max_depth_(max_depth) {
  if (max_branching < 1 || max_depth < 0)
    throw ContractViolation("random tree needs branching >= 1 and depth >= 0");
  path_.push_back(derive_seed({0x7ee, seed}));
  set_draw_cap(max_depth + 1);
}

std::unique_ptr<Game> RandomTree::clone() const { return std::make_unique<RandomTree>(*this); }

std::string RandomTree::id() const {
  return "tree:" + std::to_string(seed_) + ':' + std::to_string(max_branching_) + ':' +
         std::to_string(max_depth_);
}

Player RandomTree::mover() const { return depth() % 2 == 0 ? Player::First : Player::Second; }

std::uint64_t RandomTree::key() const { return path_.back(); }

std::string RandomTree::action_name(Action a) const { return "c" + std::to_string(a.code); }

std::string RandomTree::board_string() const {
  std::string s;
  for (std::size_t i = 1; i < path_.size(); ++i) s += std::to_string(path_[i] % 1000) + '/';
  return s.empty() ? "root" : s;
}

int RandomTree::branching() const {
  const std::uint64_t h = path_.back();
  if (depth() >= max_depth_) return 0;
  // Roughly one interior node in eight below the root is a premature leaf.
  if (depth() > 0 && (h >> 40) % 8 == 0) return 0;
  return 1 + static_cast<int>((h >> 8) % static_cast<std::uint64_t>(max_branching_));
}

int RandomTree::node_value() const {
  return static_cast<int>(splitmix64(path_.back() ^ 0xfeedULL) % 201) - 100;
}

bool RandomTree::natural_end() const { return branching() == 0; }

int RandomTree::natural_value() const {
  const int v = node_value();
  return (v > 0) - (v < 0);
}

void RandomTree::legal_actions(std::vector<Action>& out) const {
  const int b = branching();
  for (int i = 0; i < b; ++i) out.push_back({static_cast<std::uint32_t>(i)});
}

bool RandomTree::is_legal(Action a) const { return static_cast<int>(a.code) < branching(); }

void RandomTree::do_apply(Action a) { path_.push_back(child_hash(path_.back(), a.code)); }

void RandomTree::do_undo() { path_.pop_back(); }

}  // namespace gsearch
