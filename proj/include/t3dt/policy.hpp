#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "t3dt/board.hpp"

namespace t3dt {

/// Which branch of the decision trees (or which fallback) produced a move.
enum class RuleId : std::uint8_t {
  FirstRandom,
  CEdge,
  CCorner,
  CCentre,
  ECorner,
  ENearEdge,
  EOppEdge,
  ECentre,
  MEdge,
  MCorner,
  OCorner,
  OCornerCorner,
  OCornerEdge,
  OEdge,
  OCentre,
  Win,
  Block,
  ForkMake,
  ForkBlock,
  RandomFill,
  Search,
};

inline constexpr int kRuleCount = 21;

std::string_view to_string(RuleId r) noexcept;
std::optional<RuleId> parse_rule(std::string_view text);
/// True for the opening-tree rules (not WIN/BLOCK/fork/fill/search).
bool is_tree_rule(RuleId r) noexcept;

/// Strict: win, block, tree, random fill. Safe: adds fork-make and
/// fork-block between the tree and the random fill.
enum class PolicyMode : std::uint8_t { Strict, Safe };

std::string_view to_string(PolicyMode m) noexcept;
std::optional<PolicyMode> parse_mode(std::string_view text);

using RandomSource = std::mt19937_64;

struct Move {
  Cell cell;
  Mark mark;
  bool operator==(const Move&) const = default;
};

/// Position plus the move order that produced it, seen from the bot's side.
class GameContext {
 public:
  GameContext(Mark bot_mark, bool bot_started);

  /// Replays `history` from the empty board. The first move's mark fixes
  /// the first mover; an empty history needs `bot_started`.
  static GameContext replay(std::span<const Move> history, Mark bot_mark, std::optional<bool> bot_started = {});

  /// Context after the side to move plays `c`.
  GameContext after(Cell c) const;

  const Board& board() const noexcept { return board_; }
  Mark bot_mark() const noexcept { return bot_mark_; }
  bool bot_started() const noexcept { return bot_started_; }
  const std::vector<Move>& history() const noexcept { return history_; }
  bool bot_to_move() const noexcept { return board_.to_move() == bot_mark_; }

  /// Same game under a board symmetry.
  GameContext transformed(const Symmetry& s) const;

 private:
  Board board_;
  Mark bot_mark_;
  bool bot_started_;
  std::vector<Move> history_;
};

/// A policy's support set for one move, with sampling weights.
struct Decision {
  CellSet candidates;
  std::array<double, 9> weights{};
  RuleId rule = RuleId::RandomFill;

  double weight(Cell c) const noexcept { return weights[c.index()]; }

  static Decision uniform(CellSet candidates, RuleId rule);
};

/// Deterministic support of the T3DT decision trees for the bot to move.
Decision candidates(const GameContext& ctx, PolicyMode mode);

/// Draws one cell according to the decision's weights.
Cell sample(const Decision& d, RandomSource& rng);

std::pair<Cell, RuleId> choose(const GameContext& ctx, PolicyMode mode, RandomSource& rng);

/// Common surface for T3DT, the search baselines and test opponents.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// "strict"/"safe" for T3DT, "-" otherwise.
  virtual std::string mode() const { return "-"; }
  /// Full support at the bot's turn; deterministic in `ctx`.
  virtual Decision decide(const GameContext& ctx) const = 0;

  std::pair<Cell, RuleId> choose(const GameContext& ctx, RandomSource& rng) const {
    Decision d = decide(ctx);
    return {sample(d, rng), d.rule};
  }
};

class T3dtPolicy final : public Policy {
 public:
  explicit T3dtPolicy(PolicyMode mode = PolicyMode::Safe) : mode_(mode) {}
  std::string name() const override { return "t3dt"; }
  std::string mode() const override { return std::string(to_string(mode_)); }
  Decision decide(const GameContext& ctx) const override { return candidates(ctx, mode_); }
  PolicyMode policy_mode() const noexcept { return mode_; }

 private:
  PolicyMode mode_;
};

/// Uniform over every empty cell.
class RandomPolicy final : public Policy {
 public:
  std::string name() const override { return "random"; }
  Decision decide(const GameContext& ctx) const override;
};

}  // namespace t3dt
