#include "t3dt/terminal.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace t3dt {

namespace {

std::optional<Cell> parse_cell(const std::string& line) {
  std::string cleaned = line;
  for (char& ch : cleaned)
    if (ch == ',' || ch == '(' || ch == ')') ch = ' ';
  std::istringstream in(cleaned);
  int row = 0, col = 0;
  std::string extra;
  if (!(in >> row >> col) || (in >> extra)) return std::nullopt;
  if (row < 1 || row > 3 || col < 1 || col > 3) return std::nullopt;
  return Cell::at(row, col);
}

}  // namespace

int run_terminal_play(std::istream& in, std::ostream& out, const PlayOptions& opts) {
  RandomSource rng(opts.seed);
  GameContext ctx(Mark::X, opts.first == Starter::Bot);
  out << "You are O, the bot is X. Mode: " << to_string(opts.mode) << ", seed: " << opts.seed << "\n";

  while (!is_terminal(ctx.board())) {
    if (ctx.bot_to_move()) {
      const auto [cell, rule] = choose(ctx, opts.mode, rng);
      ctx = ctx.after(cell);
      out << "Bot plays " << cell.display() << " [" << to_string(rule) << "]\n";
      continue;
    }
    out << '\n' << ctx.board().render() << "Your move (row col): " << std::flush;
    std::string line;
    if (!std::getline(in, line)) {
      out << "\nInput closed; game abandoned.\n";
      return 1;
    }
    const auto cell = parse_cell(line);
    if (!cell) {
      out << "Please enter a row and a column, each 1-3.\n";
      continue;
    }
    if (!ctx.board().is_empty(*cell)) {
      out << "Cell " << cell->display() << " is occupied.\n";
      continue;
    }
    ctx = ctx.after(*cell);
  }

  out << '\n' << ctx.board().render();
  switch (outcome(ctx.board())) {
    case Outcome::XWin: out << "Result: bot wins (XWin)\n"; break;
    case Outcome::OWin: out << "Result: you win (OWin)\n"; break;
    default: out << "Result: draw\n"; break;
  }
  return 0;
}

}  // namespace t3dt
