#include "t3dt/policy.hpp"

#include <algorithm>

namespace t3dt {

namespace {

constexpr std::array<std::string_view, kRuleCount> kRuleNames = {
    "FIRST_RANDOM", "C-EDGE",          "C-CORNER",      "C-CENTRE", "E-CORNER",  "E-NEAR-EDGE", "E-OPP-EDGE",
    "E-CENTRE",     "M-EDGE",          "M-CORNER",      "O-CORNER", "O-CORNER-CORNER", "O-CORNER-EDGE",
    "O-EDGE",       "O-CENTRE",        "WIN",           "BLOCK",    "FORK-MAKE", "FORK-BLOCK",  "RANDOM-FILL",
    "SEARCH",
};

}  // namespace

std::string_view to_string(RuleId r) noexcept { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<RuleId> parse_rule(std::string_view text) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == text) return static_cast<RuleId>(i);
  return std::nullopt;
}

bool is_tree_rule(RuleId r) noexcept { return r <= RuleId::OCentre; }

std::string_view to_string(PolicyMode m) noexcept { return m == PolicyMode::Strict ? "strict" : "safe"; }

std::optional<PolicyMode> parse_mode(std::string_view text) {
  if (text == "strict") return PolicyMode::Strict;
  if (text == "safe") return PolicyMode::Safe;
  return std::nullopt;
}

GameContext::GameContext(Mark bot_mark, bool bot_started)
    : board_(bot_started ? bot_mark : opponent(bot_mark)), bot_mark_(bot_mark), bot_started_(bot_started) {}

GameContext GameContext::replay(std::span<const Move> history, Mark bot_mark, std::optional<bool> bot_started) {
  bool started;
  if (history.empty()) {
    if (!bot_started) throw GameError("empty history needs an explicit starter");
    started = *bot_started;
  } else {
    started = history.front().mark == bot_mark;
    if (bot_started && *bot_started != started) throw GameError("bot_started disagrees with the first move");
  }
  GameContext ctx(bot_mark, started);
  for (const Move& m : history) {
    if (m.mark != ctx.board_.to_move()) throw GameError("history does not alternate marks");
    ctx = ctx.after(m.cell);
  }
  return ctx;
}

GameContext GameContext::after(Cell c) const {
  GameContext next = *this;
  next.history_.push_back({c, board_.to_move()});
  next.board_ = board_.play(c);
  return next;
}

GameContext GameContext::transformed(const Symmetry& s) const {
  GameContext out(bot_mark_, bot_started_);
  out.board_ = s.apply(board_);
  out.history_.reserve(history_.size());
  for (const Move& m : history_) out.history_.push_back({s.apply(m.cell), m.mark});
  return out;
}

Decision Decision::uniform(CellSet candidates, RuleId rule) {
  Decision d;
  d.candidates = candidates;
  d.rule = rule;
  const double w = 1.0 / candidates.size();
  for (Cell c : candidates) d.weights[c.index()] = w;
  return d;
}

namespace {

struct Split {
  std::vector<Cell> bot;
  std::vector<Cell> opp;
};

Split split_history(const GameContext& ctx) {
  Split s;
  for (const Move& m : ctx.history()) (m.mark == ctx.bot_mark() ? s.bot : s.opp).push_back(m.cell);
  return s;
}

Decision first_random() {
  // One third per cell class, uniform within the class.
  Decision d;
  d.candidates = CellSet::all();
  d.rule = RuleId::FirstRandom;
  for (Cell c : CellSet::all()) d.weights[c.index()] = classify(c) == CellClass::Centre ? 1.0 / 3.0 : 1.0 / 12.0;
  return d;
}

/// Branch selected by the bot's and opponent's first moves when the bot opened.
RuleId opening_branch(Cell b1, Cell p1) {
  const CellClass opp = classify(p1);
  switch (classify(b1)) {
    case CellClass::Corner:
      return opp == CellClass::Edge ? RuleId::CEdge : opp == CellClass::Corner ? RuleId::CCorner : RuleId::CCentre;
    case CellClass::Edge:
      if (opp == CellClass::Corner) return RuleId::ECorner;
      if (opp == CellClass::Centre) return RuleId::ECentre;
      return nearer_edges(b1).contains(p1) ? RuleId::ENearEdge : RuleId::EOppEdge;
    case CellClass::Centre:
      return opp == CellClass::Edge ? RuleId::MEdge : RuleId::MCorner;
  }
  return RuleId::RandomFill;
}

CellSet second_move_targets(RuleId branch, Cell b1, Cell p1) {
  switch (branch) {
    case RuleId::CEdge: return CellSet::centre();
    case RuleId::CCorner: return CellSet::corners() - CellSet::of(b1) - CellSet::of(p1);
    case RuleId::CCentre: return CellSet::of(diag_opposite(b1));
    case RuleId::ECorner: return CellSet::centre();
    case RuleId::ENearEdge: return CellSet::of(shared_corner(b1, p1));
    case RuleId::EOppEdge: return corners_adjacent_to(b1);
    case RuleId::ECentre: return corners_adjacent_to(b1);
    case RuleId::MEdge: return CellSet::corners();
    case RuleId::MCorner: return CellSet::of(diag_opposite(p1));
    default: return {};
  }
}

CellSet corner_forks(const Board& b, Mark m) { return fork_moves(b, m) & CellSet::corners(); }

CellSet third_move_targets(RuleId branch, const Board& b, Mark bot, const Split& s) {
  const CellSet free = b.empty_cells();
  switch (branch) {
    case RuleId::CEdge:
    case RuleId::MEdge:
      return corner_forks(b, bot);
    case RuleId::CCorner: {
      const CellSet last = CellSet::corners() & free;
      return last.size() == 1 ? last : CellSet{};
    }
    case RuleId::ECorner:
      return CellSet::edges() & free;
    case RuleId::ENearEdge:
      return CellSet::centre() & free;
    case RuleId::EOppEdge:
      if (s.opp.size() < 2) return {};
      return min_distance_corners(CellSet::of(s.opp[0]) | CellSet::of(s.opp[1]), CellSet::corners() & free);
    case RuleId::MCorner:
      if (s.opp.size() < 2 || classify(s.opp[1]) == CellClass::Corner) return {};
      return corner_forks(b, bot);
    default:
      return {};
  }
}

struct TreeChoice {
  RuleId rule;
  CellSet cells;
};

std::optional<TreeChoice> bot_started_rule(const GameContext& ctx, const Split& s) {
  const Board& b = ctx.board();
  const std::size_t k = s.bot.size() + 1;
  if (k < 2 || k > 3 || s.opp.empty()) return std::nullopt;
  const Cell b1 = s.bot[0];
  const Cell p1 = s.opp[0];
  const RuleId branch = opening_branch(b1, p1);
  const CellSet second = second_move_targets(branch, b1, p1);
  if (k == 2) return TreeChoice{branch, second & b.empty_cells()};
  if (!second.contains(s.bot[1])) return std::nullopt;
  return TreeChoice{branch, third_move_targets(branch, b, ctx.bot_mark(), s) & b.empty_cells()};
}

std::optional<TreeChoice> opponent_started_rule(const GameContext& ctx, const Split& s) {
  const Board& b = ctx.board();
  const std::size_t k = s.bot.size() + 1;
  if (k > 2 || s.opp.size() != k) return std::nullopt;
  const Cell p1 = s.opp[0];
  const CellClass first = classify(p1);

  if (k == 1) {
    switch (first) {
      case CellClass::Corner: return TreeChoice{RuleId::OCorner, CellSet::centre()};
      case CellClass::Edge: return TreeChoice{RuleId::OEdge, corners_adjacent_to(p1)};
      case CellClass::Centre: return TreeChoice{RuleId::OCentre, CellSet::corners()};
    }
  }

  const Cell b1 = s.bot[0];
  const Cell p2 = s.opp[1];
  const CellSet free = b.empty_cells();
  switch (first) {
    case CellClass::Corner:
      if (b1.index() != 4) return std::nullopt;
      if (classify(p2) == CellClass::Corner) return TreeChoice{RuleId::OCornerCorner, CellSet::edges() & free};
      return TreeChoice{RuleId::OCornerEdge,
                        min_distance_corners(CellSet::of(p1) | CellSet::of(p2), CellSet::corners() & free)};
    case CellClass::Edge:
      if (!corners_adjacent_to(p1).contains(b1)) return std::nullopt;
      return TreeChoice{RuleId::OEdge, CellSet::centre() & free};
    case CellClass::Centre:
      if (classify(b1) != CellClass::Corner) return std::nullopt;
      return TreeChoice{RuleId::OCentre, CellSet::corners() & free};
  }
  return std::nullopt;
}

/// Moves that leave the opponent without a fork: either a move with no
/// threat after which the opponent has no fork cell, or a threat whose
/// forced block does not itself hand the opponent two winning moves.
Decision fork_block(const Board& b, Mark bot) {
  const Mark opp = opponent(bot);
  CellSet neutral;
  CellSet neutral_with_threat;
  for (Cell m : b.empty_cells()) {
    const Board next = b.play(m);
    const CellSet threats = winning_moves(next, bot);
    bool ok;
    if (threats.size() >= 2) {
      ok = true;
    } else if (threats.size() == 1) {
      const Board blocked = next.play(*threats.begin());
      ok = winning_moves(blocked, opp).size() < 2;
    } else {
      ok = fork_moves(next, opp).empty();
    }
    if (!ok) continue;
    neutral.insert(m);
    if (!threats.empty()) neutral_with_threat.insert(m);
  }
  if (!neutral_with_threat.empty()) return Decision::uniform(neutral_with_threat, RuleId::ForkBlock);
  if (!neutral.empty()) return Decision::uniform(neutral, RuleId::ForkBlock);
  return Decision::uniform(fork_moves(b, opp), RuleId::ForkBlock);
}

}  // namespace

Decision candidates(const GameContext& ctx, PolicyMode mode) {
  const Board& b = ctx.board();
  if (is_terminal(b)) throw GameError("no move on a finished board");
  if (!ctx.bot_to_move()) throw GameError("not the bot's turn");
  const Mark bot = ctx.bot_mark();
  const Mark opp = opponent(bot);

  if (b.move_count() == 0) return first_random();

  if (CellSet win = winning_moves(b, bot); !win.empty()) return Decision::uniform(win, RuleId::Win);
  if (CellSet block = winning_moves(b, opp); !block.empty()) return Decision::uniform(block, RuleId::Block);

  const Split s = split_history(ctx);
  const auto tree = ctx.bot_started() ? bot_started_rule(ctx, s) : opponent_started_rule(ctx, s);
  if (tree && !tree->cells.empty()) return Decision::uniform(tree->cells, tree->rule);

  if (mode == PolicyMode::Safe) {
    if (CellSet forks = fork_moves(b, bot); !forks.empty()) return Decision::uniform(forks, RuleId::ForkMake);
    if (!fork_moves(b, opp).empty()) return fork_block(b, bot);
  }
  return Decision::uniform(b.empty_cells(), RuleId::RandomFill);
}

Cell sample(const Decision& d, RandomSource& rng) {
  if (d.candidates.empty()) throw GameError("decision has no candidates");
  if (d.candidates.size() == 1) return *d.candidates.begin();
  // 53-bit uniform in [0, 1); independent of the standard library's
  // distribution implementations so seeds replay across toolchains.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double acc = 0.0;
  Cell last = *d.candidates.begin();
  for (Cell c : d.candidates) {
    acc += d.weights[c.index()];
    last = c;
    if (u < acc) return c;
  }
  return last;
}

std::pair<Cell, RuleId> choose(const GameContext& ctx, PolicyMode mode, RandomSource& rng) {
  const Decision d = candidates(ctx, mode);
  return {sample(d, rng), d.rule};
}

Decision RandomPolicy::decide(const GameContext& ctx) const {
  if (is_terminal(ctx.board())) throw GameError("no move on a finished board");
  return Decision::uniform(ctx.board().empty_cells(), RuleId::RandomFill);
}

}  // namespace t3dt
