#include "t3dt/game.hpp"

#include <sstream>

namespace t3dt {

Board GameRecord::replay() const {
  if (plies.empty()) return Board();
  Board b(plies.front().mark);
  for (const PlyRecord& p : plies) {
    if (p.mark != b.to_move()) throw GameError("transcript ply " + std::to_string(p.ply) + " is out of turn");
    b = b.play(p.cell);
  }
  return b;
}

std::string GameRecord::transcript() const {
  std::ostringstream out;
  for (const PlyRecord& p : plies) {
    out << p.ply << ' ' << to_char(p.mark) << ' ' << p.cell.index() << ' '
        << (p.rule ? to_string(*p.rule) : std::string_view("-")) << '\n';
  }
  out << "RESULT " << to_string(outcome) << '\n';
  return out.str();
}

GameRecord GameRecord::parse(std::string_view text) {
  GameRecord rec;
  std::istringstream in{std::string(text)};
  std::string line;
  bool finished = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (finished) throw GameError("transcript has lines after RESULT");
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    if (first == "RESULT") {
      std::string o;
      fields >> o;
      auto parsed = parse_outcome(o);
      if (!parsed) throw GameError("unknown outcome '" + o + "'");
      rec.outcome = *parsed;
      finished = true;
      continue;
    }
    std::string mark, rule;
    int cell = -1;
    PlyRecord p;
    try {
      p.ply = std::stoi(first);
    } catch (const std::exception&) {
      throw GameError("bad transcript line: " + line);
    }
    if (!(fields >> mark >> cell >> rule)) throw GameError("bad transcript line: " + line);
    auto m = parse_mark(mark);
    if (!m) throw GameError("bad mark in transcript: " + mark);
    p.mark = *m;
    p.cell = Cell(cell);
    if (rule != "-") {
      p.rule = parse_rule(rule);
      if (!p.rule) throw GameError("unknown rule '" + rule + "'");
    }
    rec.plies.push_back(p);
  }
  if (!finished) throw GameError("transcript lacks a RESULT line");
  return rec;
}

GameRecord play_game(const Policy& bot, const Policy& opp, Starter first, RandomSource& rng, Mark bot_mark) {
  const Mark opp_mark = opponent(bot_mark);
  GameContext bot_ctx(bot_mark, first == Starter::Bot);
  GameContext opp_ctx(opp_mark, first == Starter::Opponent);
  GameRecord rec;

  while (!is_terminal(bot_ctx.board())) {
    const bool bots_turn = bot_ctx.bot_to_move();
    const Policy& mover = bots_turn ? bot : opp;
    const GameContext& ctx = bots_turn ? bot_ctx : opp_ctx;
    const Decision d = mover.decide(ctx);
    const Cell c = sample(d, rng);
    const Mark m = ctx.board().to_move();
    if (!(d.candidates - ctx.board().empty_cells()).empty() || !ctx.board().is_empty(c)) {
      rec.outcome = Outcome::Ongoing;
      throw IllegalMoveError(mover.name() + " proposed occupied cell " + std::to_string(c.index()), rec);
    }
    rec.plies.push_back({static_cast<int>(rec.plies.size()) + 1, m, c, d.rule});
    bot_ctx = bot_ctx.after(c);
    opp_ctx = opp_ctx.after(c);
  }
  rec.outcome = outcome(bot_ctx.board());
  return rec;
}

}  // namespace t3dt
