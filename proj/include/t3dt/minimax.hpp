#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "t3dt/board.hpp"
#include "t3dt/policy.hpp"

namespace t3dt {

enum class SearchAlgorithm : std::uint8_t {
  Minimax,         // MM: full tree, values in {-1, 0, +1}
  AlphaBeta,       // ABP: same values, alpha-beta cutoffs
  AlphaBetaDepth,  // ABA: alpha-beta on depth-adjusted scores
};

std::string_view to_string(SearchAlgorithm a) noexcept;  // "mm", "abp", "aba"
std::optional<SearchAlgorithm> parse_algorithm(std::string_view text);

/// Base of the depth-adjusted score: a win `d` plies ahead scores K - d.
inline constexpr int kWinScore = 10;

struct SearchStats {
  std::uint64_t nodes_visited = 0;
  int max_depth = 0;
};

/// Score is from the perspective of the mark that moves.
struct SearchResult {
  Cell cell{0};
  int score = 0;
  SearchStats stats;
};

/// Ties go to the lowest cell index. Throws on finished boards or when
/// `mark` is not to move.
SearchResult mm_move(const Board& b, Mark mark);
SearchResult abp_move(const Board& b, Mark mark);
SearchResult aba_move(const Board& b, Mark mark);
SearchResult search(SearchAlgorithm algo, const Board& b, Mark mark);

/// Exact value of each legal move for the side to move (full window per
/// child); empty cells only.
std::array<std::optional<int>, 9> move_values(SearchAlgorithm algo, const Board& b);

/// Adapter so the baselines share the policy surface with T3DT. The
/// support is the single searched move, tagged SEARCH.
class MinimaxPolicy final : public Policy {
 public:
  explicit MinimaxPolicy(SearchAlgorithm algo) : algo_(algo) {}
  std::string name() const override { return std::string(to_string(algo_)); }
  Decision decide(const GameContext& ctx) const override;
  SearchAlgorithm algorithm() const noexcept { return algo_; }

 private:
  SearchAlgorithm algo_;
};

}  // namespace t3dt
