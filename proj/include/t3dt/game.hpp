#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "t3dt/board.hpp"
#include "t3dt/policy.hpp"

namespace t3dt {

struct PlyRecord {
  int ply = 0;  // 1-based
  Mark mark = Mark::X;
  Cell cell{0};
  std::optional<RuleId> rule;  // absent for moves with no policy rule (enumerated or human)

  bool operator==(const PlyRecord&) const = default;
};

/// A full or partial game. The text form is one line per ply,
/// `<ply> <mark> <cell> <rule>` with `-` for a missing rule, then
/// `RESULT <outcome>`.
struct GameRecord {
  std::vector<PlyRecord> plies;
  Outcome outcome = Outcome::Ongoing;

  /// Board after replaying every ply; throws if the plies are illegal.
  Board replay() const;
  std::string transcript() const;
  static GameRecord parse(std::string_view text);

  bool operator==(const GameRecord&) const = default;
};

/// Thrown when a policy proposes an occupied or out-of-turn cell. Carries
/// the game so far.
class IllegalMoveError : public std::runtime_error {
 public:
  IllegalMoveError(const std::string& what, GameRecord record)
      : std::runtime_error(what), record_(std::move(record)) {}
  const GameRecord& record() const noexcept { return record_; }

 private:
  GameRecord record_;
};

enum class Starter : std::uint8_t { Bot, Opponent };

/// Alternates the two policies from the empty board until the game ends.
/// Each side sees the game from its own perspective: `bot` plays
/// `bot_mark`, `opp` plays the other mark.
GameRecord play_game(const Policy& bot, const Policy& opp, Starter first, RandomSource& rng,
                     Mark bot_mark = Mark::X);

}  // namespace t3dt
