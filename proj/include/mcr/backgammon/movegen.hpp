#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcr/backgammon/board.hpp"

namespace mcr::bg {

struct DiceRoll {
  int d1 = 1;
  int d2 = 1;

  [[nodiscard]] constexpr bool is_double() const noexcept { return d1 == d2; }
  [[nodiscard]] constexpr int high() const noexcept { return d1 > d2 ? d1 : d2; }
  [[nodiscard]] constexpr int low() const noexcept { return d1 > d2 ? d2 : d1; }
  // 2 for non-doubles, 1 for doubles; the 21 distinct rolls weigh 36 in total.
  [[nodiscard]] constexpr int weight() const noexcept { return is_double() ? 1 : 2; }

  friend constexpr bool operator==(const DiceRoll&, const DiceRoll&) = default;
};

[[nodiscard]] inline bool valid_roll(const DiceRoll& r) noexcept {
  return r.d1 >= 1 && r.d1 <= 6 && r.d2 >= 1 && r.d2 <= 6;
}

// The 21 distinct rolls, high die first.
[[nodiscard]] inline const std::array<DiceRoll, 21>& distinct_rolls() {
  static const std::array<DiceRoll, 21> rolls = [] {
    std::array<DiceRoll, 21> r{};
    int n = 0;
    for (int a = 1; a <= 6; ++a)
      for (int b = 1; b <= a; ++b) r[n++] = DiceRoll{a, b};
    return r;
  }();
  return rolls;
}

// One checker move in the mover's own numbering: 25 is the bar, 0 is off.
struct CheckerMove {
  std::int8_t from = 0;
  std::int8_t to = 0;
  bool hit = false;
  friend constexpr bool operator==(const CheckerMove&, const CheckerMove&) = default;
};

struct Play {
  Board afterstate;
  std::array<CheckerMove, 4> moves{};
  std::uint8_t move_count = 0;
};

// Distinct afterstates reachable with one roll, sorted by canonical order.
// Never empty: a player who cannot move contributes the unchanged board with
// the turn passed.
struct MoveSet {
  std::vector<Play> plays;

  [[nodiscard]] std::size_t size() const noexcept { return plays.size(); }
  [[nodiscard]] std::vector<Board> afterstates() const {
    std::vector<Board> out;
    out.reserve(plays.size());
    for (const auto& p : plays) out.push_back(p.afterstate);
    return out;
  }
};

// "24/18 13/11*", "bar/22", "6/off"; "(no move)" for a dance.
[[nodiscard]] inline std::string format_play(const Play& play) {
  if (play.move_count == 0) return "(no move)";
  std::string out;
  for (int i = 0; i < play.move_count; ++i) {
    const auto& m = play.moves[i];
    if (i) out += ' ';
    out += m.from == kBarDistance ? std::string("bar") : std::to_string(m.from);
    out += '/';
    out += m.to == 0 ? std::string("off") : std::to_string(m.to);
    if (m.hit) out += '*';
  }
  return out;
}

namespace detail {

// Position seen from the player to move. own[d] / opp[d] hold checkers at
// distance d from the mover's bear-off; own[0] is borne off, own[25] and
// opp[25] are the bars.
struct GenPos {
  std::array<std::int8_t, 26> own;
  std::array<std::int8_t, 26> opp;
  std::int8_t outside;  // own checkers on 7..25; bearing off needs zero
};

inline GenPos to_gen(const Board& b) noexcept {
  GenPos g{};
  const Side me = b.to_move;
  const Side them = opponent(me);
  for (int d = 1; d <= kPoints; ++d) {
    const int v = b.points[point_of(me, d) - 1] * sign(me);
    if (v > 0) g.own[d] = static_cast<std::int8_t>(v);
    if (v < 0) g.opp[d] = static_cast<std::int8_t>(-v);
  }
  g.own[0] = static_cast<std::int8_t>(b.off[index(me)]);
  g.own[25] = static_cast<std::int8_t>(b.bar[index(me)]);
  g.opp[25] = static_cast<std::int8_t>(b.bar[index(them)]);
  int outside = 0;
  for (int d = 7; d <= 25; ++d) outside += g.own[d];
  g.outside = static_cast<std::int8_t>(outside);
  return g;
}

// Afterstate of `mover` with the turn passed to the opponent.
inline Board from_gen(const GenPos& g, Side mover, std::uint8_t opp_off) noexcept {
  Board b;
  const int s = sign(mover);
  for (int d = 1; d <= kPoints; ++d) {
    b.points[point_of(mover, d) - 1] = static_cast<std::int8_t>(s * (g.own[d] - g.opp[d]));
  }
  b.off[index(mover)] = static_cast<std::uint8_t>(g.own[0]);
  b.bar[index(mover)] = static_cast<std::uint8_t>(g.own[25]);
  b.bar[index(opponent(mover))] = static_cast<std::uint8_t>(g.opp[25]);
  b.off[index(opponent(mover))] = opp_off;
  b.to_move = opponent(mover);
  return b;
}

inline bool can_move(const GenPos& g, int from, int die) noexcept {
  if (g.own[from] == 0) return false;
  if (g.own[25] > 0 && from != 25) return false;
  const int to = from - die;
  if (to >= 1) return g.opp[to] <= 1;
  if (g.outside > 0) return false;
  if (to == 0) return true;
  for (int d = from + 1; d <= 6; ++d)
    if (g.own[d] > 0) return false;
  return true;
}

// Returns true when the move hit a blot.
inline bool apply_move(GenPos& g, int from, int die) noexcept {
  const int to = from > die ? from - die : 0;
  --g.own[from];
  ++g.own[to];
  if (from >= 7 && to <= 6) --g.outside;
  if (to >= 1 && g.opp[to] == 1) {
    g.opp[to] = 0;
    ++g.opp[25];
    return true;
  }
  return false;
}

struct Leaf {
  GenPos pos;
  std::array<CheckerMove, 4> moves;
  std::uint8_t used;
  std::uint8_t first_die;
};

inline bool same_pos(const GenPos& a, const GenPos& b) noexcept {
  return std::memcmp(a.own.data(), b.own.data(), 26) == 0 && std::memcmp(a.opp.data(), b.opp.data(), 26) == 0;
}

inline bool pos_less(const GenPos& a, const GenPos& b) noexcept {
  const int c = std::memcmp(a.own.data(), b.own.data(), 26);
  if (c != 0) return c < 0;
  return std::memcmp(a.opp.data(), b.opp.data(), 26) < 0;
}

class Search {
 public:
  explicit Search(std::vector<Leaf>& leaves) : leaves_(leaves) {}

  // Fills leaves with the maximal-dice-usage plays; duplicates remain.
  void run(const GenPos& start, const DiceRoll& roll) {
    leaves_.clear();
    max_used_ = 0;
    if (roll.is_double()) {
      dice_ = {roll.d1, roll.d1, roll.d1, roll.d1};
      n_dice_ = 4;
      Leaf cur{start, {}, 0, 0};
      descend(cur, 0, 25, true);
    } else {
      n_dice_ = 2;
      for (const auto& order : {std::array<int, 2>{roll.d1, roll.d2}, std::array<int, 2>{roll.d2, roll.d1}}) {
        dice_ = {order[0], order[1], 0, 0};
        Leaf cur{start, {}, 0, 0};
        descend(cur, 0, 25, false);
      }
      if (max_used_ == 1) {
        // Only one die can be played: it must be the higher one when possible.
        const int high = roll.high();
        const bool high_playable = std::any_of(leaves_.begin(), leaves_.end(),
                                               [&](const Leaf& l) { return l.first_die == high; });
        if (high_playable) {
          std::erase_if(leaves_, [&](const Leaf& l) { return l.first_die != high; });
        }
      }
    }
  }

 private:
  void record(const Leaf& cur, int depth) {
    if (depth < max_used_) return;
    if (depth > max_used_) {
      leaves_.clear();
      max_used_ = depth;
    }
    leaves_.push_back(cur);
    leaves_.back().used = static_cast<std::uint8_t>(depth);
  }

  // For doubles, sources are visited in non-increasing order: any multiset
  // of same-die moves can be replayed highest source first.
  void descend(const Leaf& cur, int depth, int max_src, bool ordered) {
    if (depth == n_dice_) {
      record(cur, depth);
      return;
    }
    const int die = dice_[depth];
    bool moved = false;
    const int top = cur.pos.own[25] > 0 ? 25 : (ordered ? max_src : 24);
    const int bottom = cur.pos.own[25] > 0 ? 25 : 1;
    for (int from = top; from >= bottom; --from) {
      if (!can_move(cur.pos, from, die)) continue;
      moved = true;
      Leaf next = cur;
      const bool hit = apply_move(next.pos, from, die);
      next.moves[depth] = CheckerMove{static_cast<std::int8_t>(from),
                                      static_cast<std::int8_t>(from > die ? from - die : 0), hit};
      if (depth == 0) next.first_die = static_cast<std::uint8_t>(die);
      descend(next, depth + 1, from, ordered);
    }
    if (!moved) record(cur, depth);
  }

  std::vector<Leaf>& leaves_;
  std::array<int, 4> dice_{};
  int n_dice_ = 0;
  int max_used_ = 0;
};

inline std::vector<Leaf>& scratch_leaves() {
  thread_local std::vector<Leaf> leaves = [] {
    std::vector<Leaf> v;
    v.reserve(1024);
    return v;
  }();
  return leaves;
}

inline void dedup_leaves(std::vector<Leaf>& leaves) {
  std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) { return pos_less(a.pos, b.pos); });
  leaves.erase(std::unique(leaves.begin(), leaves.end(),
                           [](const Leaf& a, const Leaf& b) { return same_pos(a.pos, b.pos); }),
               leaves.end());
}

}  // namespace detail

// Hot-path generator without validation or move lists. `out` is overwritten
// with the afterstates in canonical order. Requires a valid non-terminal board.
inline void generate_afterstates(const Board& board, const DiceRoll& roll, std::vector<Board>& out) {
  auto& leaves = detail::scratch_leaves();
  detail::Search(leaves).run(detail::to_gen(board), roll);
  detail::dedup_leaves(leaves);
  out.clear();
  const Side mover = board.to_move;
  const auto opp_off = board.off[index(opponent(mover))];
  for (const auto& l : leaves) out.push_back(detail::from_gen(l.pos, mover, opp_off));
  std::sort(out.begin(), out.end());
}

// All distinct legal afterstates of the player to move for `roll`: bar
// entry first, hits send blots to the bar, bearing off only with every
// checker home (exact die, or a larger die from the highest occupied point),
// both dice used when possible, else the higher die when either alone is
// playable, four moves for doubles.
[[nodiscard]] inline MoveSet legal_afterstates(const Board& board, const DiceRoll& roll) {
  validate(board);
  if (is_terminal(board)) throw InvalidBoard("game is already over");
  if (!valid_roll(roll)) throw std::invalid_argument("invalid dice roll");

  auto& leaves = detail::scratch_leaves();
  detail::Search(leaves).run(detail::to_gen(board), roll);
  detail::dedup_leaves(leaves);

  MoveSet set;
  set.plays.reserve(leaves.size());
  const Side mover = board.to_move;
  const auto opp_off = board.off[index(opponent(mover))];
  for (const auto& l : leaves) {
    Play p;
    p.afterstate = detail::from_gen(l.pos, mover, opp_off);
    p.moves = l.moves;
    p.move_count = l.used;
    set.plays.push_back(p);
  }
  std::sort(set.plays.begin(), set.plays.end(),
            [](const Play& a, const Play& b) { return a.afterstate < b.afterstate; });
  return set;
}

namespace detail {
inline std::uint64_t perft_rec(const Board& b, int depth, std::vector<std::vector<Board>>& buffers) {
  auto& moves = buffers[depth];
  std::uint64_t total = 0;
  for (const auto& roll : distinct_rolls()) {
    generate_afterstates(b, roll, moves);
    if (depth == 1) {
      total += static_cast<std::uint64_t>(roll.weight()) * moves.size();
      continue;
    }
    // Recursion reuses the deeper buffers, so iterate over a copy.
    const std::vector<Board> level = moves;
    std::uint64_t sub = 0;
    for (const auto& a : level) sub += is_terminal(a) ? 1 : perft_rec(a, depth - 1, buffers);
    total += static_cast<std::uint64_t>(roll.weight()) * sub;
  }
  return total;
}
}  // namespace detail

// Roll-weighted count of afterstate sequences `depth` plies deep. Finished
// games count as a single leaf and are not expanded further.
[[nodiscard]] inline std::uint64_t perft(const Board& board, int depth) {
  if (depth < 1) throw std::invalid_argument("perft depth must be >= 1");
  validate(board);
  if (is_terminal(board)) return 0;
  std::vector<std::vector<Board>> buffers(static_cast<std::size_t>(depth) + 1);
  return detail::perft_rec(board, depth, buffers);
}

}  // namespace mcr::bg
