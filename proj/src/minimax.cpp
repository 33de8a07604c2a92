#include "t3dt/minimax.hpp"

#include <algorithm>
#include <bit>

namespace t3dt {

std::string_view to_string(SearchAlgorithm a) noexcept {
  switch (a) {
    case SearchAlgorithm::Minimax: return "mm";
    case SearchAlgorithm::AlphaBeta: return "abp";
    case SearchAlgorithm::AlphaBetaDepth: return "aba";
  }
  return "?";
}

std::optional<SearchAlgorithm> parse_algorithm(std::string_view text) {
  if (text == "mm") return SearchAlgorithm::Minimax;
  if (text == "abp") return SearchAlgorithm::AlphaBeta;
  if (text == "aba") return SearchAlgorithm::AlphaBetaDepth;
  return std::nullopt;
}

namespace {

constexpr int kInf = 1000;

constexpr std::array<bool, 512> make_line_table() {
  std::array<bool, 512> t{};
  for (unsigned bits = 0; bits < 512; ++bits) t[bits] = has_line(static_cast<std::uint16_t>(bits));
  return t;
}

constexpr std::array<bool, 512> kHasLine = make_line_table();

// Negamax over raw masks: `me` is to move, `them` made the last move.
class Searcher {
 public:
  SearchStats stats;

  int minimax(std::uint16_t me, std::uint16_t them, int depth) {
    visit(depth);
    if (kHasLine[them]) return -1;
    std::uint16_t free = static_cast<std::uint16_t>(~(me | them) & CellSet::kAllBits);
    if (free == 0) return 0;
    int best = -kInf;
    while (free) {
      const std::uint16_t bit = free & static_cast<std::uint16_t>(-free);
      free ^= bit;
      best = std::max(best, -minimax(them, me | bit, depth + 1));
    }
    return best;
  }

  template <bool DepthAware>
  int alphabeta(std::uint16_t me, std::uint16_t them, int depth, int alpha, int beta) {
    visit(depth);
    if (kHasLine[them]) return DepthAware ? -(kWinScore - depth) : -1;
    std::uint16_t free = static_cast<std::uint16_t>(~(me | them) & CellSet::kAllBits);
    if (free == 0) return 0;
    int best = -kInf;
    while (free) {
      const std::uint16_t bit = free & static_cast<std::uint16_t>(-free);
      free ^= bit;
      const int v = -alphabeta<DepthAware>(them, me | bit, depth + 1, -beta, -alpha);
      if (v > best) best = v;
      if (best > alpha) alpha = best;
      if (alpha >= beta) break;
    }
    return best;
  }

  int child(SearchAlgorithm algo, std::uint16_t me, std::uint16_t them, int alpha, int beta) {
    switch (algo) {
      case SearchAlgorithm::Minimax: return -minimax(them, me, 1);
      case SearchAlgorithm::AlphaBeta: return -alphabeta<false>(them, me, 1, -beta, -alpha);
      case SearchAlgorithm::AlphaBetaDepth: return -alphabeta<true>(them, me, 1, -beta, -alpha);
    }
    return 0;
  }

 private:
  void visit(int depth) {
    ++stats.nodes_visited;
    if (depth > stats.max_depth) stats.max_depth = depth;
  }
};

void check_searchable(const Board& b, Mark mark) {
  if (is_terminal(b)) throw GameError("cannot search a finished board");
  if (b.to_move() != mark) throw GameError("searched mark is not to move");
}

}  // namespace

SearchResult search(SearchAlgorithm algo, const Board& b, Mark mark) {
  check_searchable(b, mark);
  const std::uint16_t me = b.cells_of(mark).bits();
  const std::uint16_t them = b.cells_of(opponent(mark)).bits();
  Searcher s;
  s.stats.nodes_visited = 1;  // root

  SearchResult out;
  int best = -kInf;
  int alpha = -kInf;
  for (Cell c : b.empty_cells()) {
    const int v = s.child(algo, static_cast<std::uint16_t>(me | c.bit()), them, alpha, kInf);
    if (v > best) {
      best = v;
      out.cell = c;
    }
    if (algo != SearchAlgorithm::Minimax) alpha = std::max(alpha, best);
  }
  out.score = best;
  out.stats = s.stats;
  return out;
}

SearchResult mm_move(const Board& b, Mark mark) { return search(SearchAlgorithm::Minimax, b, mark); }
SearchResult abp_move(const Board& b, Mark mark) { return search(SearchAlgorithm::AlphaBeta, b, mark); }
SearchResult aba_move(const Board& b, Mark mark) { return search(SearchAlgorithm::AlphaBetaDepth, b, mark); }

std::array<std::optional<int>, 9> move_values(SearchAlgorithm algo, const Board& b) {
  const Mark mark = b.to_move();
  check_searchable(b, mark);
  const std::uint16_t me = b.cells_of(mark).bits();
  const std::uint16_t them = b.cells_of(opponent(mark)).bits();
  std::array<std::optional<int>, 9> out;
  Searcher s;
  for (Cell c : b.empty_cells())
    out[c.index()] = s.child(algo, static_cast<std::uint16_t>(me | c.bit()), them, -kInf, kInf);
  return out;
}

Decision MinimaxPolicy::decide(const GameContext& ctx) const {
  if (!ctx.bot_to_move()) throw GameError("not the searcher's turn");
  const SearchResult r = search(algo_, ctx.board(), ctx.bot_mark());
  return Decision::uniform(CellSet::of(r.cell), RuleId::Search);
}

}  // namespace t3dt
