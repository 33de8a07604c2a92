#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "t3dt/board.hpp"
#include "t3dt/game.hpp"
#include "t3dt/minimax.hpp"
#include "t3dt/policy.hpp"

namespace t3dt {

/// Counts over every distinct legal move sequence from the empty board
/// (X first), each ending at a win or a full board. Symmetric games are
/// counted separately.
struct EnumerationCensus {
  std::uint64_t total_games = 0;
  std::uint64_t x_wins = 0;
  std::uint64_t o_wins = 0;
  std::uint64_t draws = 0;
  std::map<int, std::uint64_t> games_by_length;  // plies 5..9

  double win_ratio() const { return static_cast<double>(x_wins) / static_cast<double>(o_wins); }
  void merge(const EnumerationCensus& other);
  std::string to_json() const;
  bool operator==(const EnumerationCensus&) const = default;
};

/// `threads` > 1 splits the nine opening moves across workers; the counts
/// do not depend on it.
EnumerationCensus enumerate_games(unsigned threads = 1);

/// Every board reachable from the empty board with `first_mover` to start,
/// terminal positions included, without duplicates.
std::vector<Board> reachable_boards(Mark first_mover);

enum class Role : std::uint8_t { First, Second, Both };

std::string_view to_string(Role r) noexcept;
std::optional<Role> parse_role(std::string_view text);

struct VerificationReport {
  std::string policy;
  std::string mode;
  Role role = Role::Both;
  std::uint64_t wins = 0;   // leaves won by the policy
  std::uint64_t draws = 0;  // drawn leaves
  std::uint64_t loss_count = 0;
  std::uint64_t branch_nodes = 0;  // edges explored: policy candidates plus opponent replies
  std::vector<GameRecord> losses;  // first `max_transcripts` losing lines

  bool no_loss() const noexcept { return loss_count == 0; }
  std::uint64_t leaves() const noexcept { return wins + draws + loss_count; }
  void merge(const VerificationReport& other, std::size_t max_transcripts);
  std::string to_json() const;
};

struct VerifyOptions {
  std::size_t max_transcripts = 100;
};

/// Exhaustive AND/OR traversal: at the policy's turns every candidate in
/// its support is followed, at the opponent's turns every legal move. The
/// policy plays X in both roles. Illegal proposals raise IllegalMoveError.
VerificationReport verify_no_loss(const Policy& policy, Role role, VerifyOptions opts = {});

/// Same traversal rooted at an arbitrary context (policy = the context's bot).
VerificationReport verify_from(const Policy& policy, const GameContext& start, VerifyOptions opts = {});

/// Bot opens in any cell of `opening`, opponent answers in any cell of
/// `reply`; the rest of the tree is traversed exhaustively.
VerificationReport verify_branch(const Policy& policy, CellClass opening, CellClass reply,
                                 VerifyOptions opts = {});

struct OptimalityEntry {
  Board board;
  Cell mm_cell{0};
  Cell aba_cell{0};
  int plies_to_win_mm = 0;
  int plies_to_win_aba = 0;
};

/// Plies until the side to move wins when `algo` plays both sides from
/// `b` after `first` is played; nullopt if the mover does not win.
std::optional<int> selfplay_plies_to_win(SearchAlgorithm algo, const Board& b, Cell first);

/// Reachable positions (either first mover) won for the side to move where
/// MM and ABA choose different cells and MM's cell wins strictly later under
/// MM self-play than ABA's cell under ABA self-play.
std::vector<OptimalityEntry> optimality_scan();

}  // namespace t3dt
