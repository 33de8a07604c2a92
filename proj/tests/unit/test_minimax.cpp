#include <doctest.h>

#include <map>

#include "t3dt/minimax.hpp"
#include "t3dt/verify.hpp"

using namespace t3dt;

namespace {

bool line(const std::string& s, char m) {
  static const int L[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  for (const auto& l : L)
    if (s[l[0]] == m && s[l[1]] == m && s[l[2]] == m) return true;
  return false;
}

// Plain memoised minimax on strings, value for the side to move.
int oracle_value(const std::string& s, char me, std::map<std::string, int>& memo) {
  const char them = me == 'X' ? 'O' : 'X';
  if (line(s, them)) return -1;
  if (s.find('.') == std::string::npos) return 0;
  const std::string key = s + me;
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  int best = -2;
  for (int i = 0; i < 9; ++i) {
    if (s[i] != '.') continue;
    std::string t = s;
    t[i] = me;
    best = std::max(best, -oracle_value(t, them, memo));
  }
  return memo[key] = best;
}

int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("aba") == SearchAlgorithm::AlphaBetaDepth);
  CHECK(to_string(SearchAlgorithm::Minimax) == "mm");
  CHECK_FALSE(parse_algorithm("MM").has_value());
}

TEST_CASE("empty board: draw and the full tree size") {
  const Board empty;
  const SearchResult mm = mm_move(empty, Mark::X);
  CHECK(mm.score == 0);
  CHECK(mm.cell == Cell(0));
  CHECK(mm.stats.nodes_visited == 549946);  // every node of the game tree
  CHECK(mm.stats.max_depth == 9);
  const SearchResult abp = abp_move(empty, Mark::X);
  CHECK(abp.score == 0);
  CHECK(abp.stats.nodes_visited < mm.stats.nodes_visited / 10);
}

TEST_CASE("immediate win and forced block") {
  const Board b = Board::from_text("XX.OO....");
  CHECK(aba_move(b, Mark::X).cell == Cell(2));
  CHECK(aba_move(b, Mark::X).score == kWinScore - 1);
  CHECK(mm_move(b, Mark::X).score == 1);
  const Board block = Board::from_text("X..OO...X");
  CHECK(abp_move(block, Mark::X).cell == Cell(5));
  CHECK_THROWS_AS(mm_move(b, Mark::O), GameError);
  CHECK_THROWS_AS(mm_move(Board::from_text("XXXOO...."), Mark::O), GameError);
}

TEST_CASE("the three searches agree in sign with an oracle everywhere") {
  std::map<std::string, int> memo;
  std::size_t n = 0;
  for (Mark first : {Mark::X, Mark::O}) {
    for (const Board& b : reachable_boards(first)) {
      if (is_terminal(b)) continue;
      const Mark me = b.to_move();
      const int truth = oracle_value(b.text(), to_char(me), memo);
      const SearchResult mm = mm_move(b, me);
      const SearchResult abp = abp_move(b, me);
      const SearchResult aba = aba_move(b, me);
      CHECK(mm.score == truth);
      CHECK(abp.score == truth);
      CHECK(sign(aba.score) == truth);
      CHECK(abp.stats.nodes_visited <= mm.stats.nodes_visited);

      // The chosen cell is a value-preserving move.
      std::string t = b.text();
      t[mm.cell.index()] = to_char(me);
      CHECK(-oracle_value(t, to_char(opponent(me)), memo) == truth);
      t = b.text();
      t[abp.cell.index()] = to_char(me);
      CHECK(-oracle_value(t, to_char(opponent(me)), memo) == truth);
      ++n;
    }
  }
  CHECK(n > 8000);
}

TEST_CASE("move values are exact per child") {
  const Board b = Board::from_text("OOX.X..O.");
  const auto mm = move_values(SearchAlgorithm::Minimax, b);
  const auto aba = move_values(SearchAlgorithm::AlphaBetaDepth, b);
  for (int i : {0, 1, 2, 4, 7}) CHECK_FALSE(mm[i].has_value());
  CHECK(mm[6] == 1);
  CHECK(mm[3] == 1);  // a fork also wins, just later
  CHECK(aba[6] == kWinScore - 1);
  CHECK(*aba[3] < *aba[6]);
  // Lowest-index tie break: MM prefers (2,1), ABA the immediate win.
  CHECK(mm_move(b, Mark::X).cell == Cell(3));
  CHECK(aba_move(b, Mark::X).cell == Cell(6));
}

TEST_CASE("search policy adapter") {
  const MinimaxPolicy p(SearchAlgorithm::AlphaBeta);
  CHECK(p.name() == "abp");
  CHECK(p.mode() == "-");
  GameContext ctx(Mark::X, true);
  const Decision d = p.decide(ctx);
  CHECK(d.rule == RuleId::Search);
  CHECK(d.candidates.size() == 1);
}
