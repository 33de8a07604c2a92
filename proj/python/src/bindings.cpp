#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "t3dt/bench.hpp"
#include "t3dt/game.hpp"
#include "t3dt/minimax.hpp"
#include "t3dt/policy.hpp"
#include "t3dt/verify.hpp"

namespace py = pybind11;
using namespace t3dt;

namespace {

Mark mark_arg(const std::string& s) {
  auto m = parse_mark(s);
  if (!m) throw py::value_error("mark must be 'X' or 'O'");
  return *m;
}

PolicyMode mode_arg(const std::string& s) {
  auto m = parse_mode(s);
  if (!m) throw py::value_error("mode must be 'strict' or 'safe'");
  return *m;
}

GameContext context_arg(const std::vector<int>& history, const std::string& bot_mark, std::optional<bool> bot_started) {
  const Mark bot = mark_arg(bot_mark);
  std::vector<Move> moves;
  const bool started = bot_started.value_or(true);
  Mark m = started ? bot : opponent(bot);
  for (int c : history) {
    moves.push_back({Cell(c), m});
    m = opponent(m);
  }
  return GameContext::replay(moves, bot, started);
}

std::unique_ptr<Policy> policy_arg(const std::string& name, const std::string& mode) {
  if (name == "t3dt") return std::make_unique<T3dtPolicy>(mode_arg(mode));
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (auto a = parse_algorithm(name)) return std::make_unique<MinimaxPolicy>(*a);
  throw py::value_error("unknown policy " + name);
}

py::dict decision_dict(const Decision& d) {
  py::dict out;
  out["candidates"] = d.candidates.indices();
  py::dict w;
  for (Cell c : d.candidates) w[py::int_(c.index())] = d.weight(c);
  out["weights"] = w;
  out["rule"] = std::string(to_string(d.rule));
  return out;
}

TimingMatrix matrix_arg(const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<TimingMatrix::Row> out;
  for (const auto& r : rows) {
    if (r.size() != 9) throw py::value_error("each timing row needs 9 entries");
    TimingMatrix::Row row{};
    std::copy(r.begin(), r.end(), row.begin());
    out.push_back(row);
  }
  return TimingMatrix("matrix", std::move(out));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tic-tac-toe decision-tree bot, search baselines, verifier and timing metrics";

  py::register_exception<GameError>(m, "GameError", PyExc_ValueError);

  m.def(
      "outcome", [](const std::string& board) { return std::string(to_string(outcome(Board::from_text(board)))); },
      py::arg("board"), "XWin, OWin, Draw or Ongoing for a 9-character board");
  m.def(
      "to_move", [](const std::string& board) { return std::string(1, to_char(Board::from_text(board).to_move())); },
      py::arg("board"));
  m.def(
      "classify", [](int cell) { return std::string(to_string(classify(Cell(cell)))); }, py::arg("cell"));
  m.def(
      "winning_moves",
      [](const std::string& board, const std::string& mark) {
        return winning_moves(Board::from_text(board), mark_arg(mark)).indices();
      },
      py::arg("board"), py::arg("mark"));
  m.def(
      "fork_moves",
      [](const std::string& board, const std::string& mark) {
        return fork_moves(Board::from_text(board), mark_arg(mark)).indices();
      },
      py::arg("board"), py::arg("mark"));
  m.def(
      "d4_transforms",
      [](const std::string& board) {
        std::vector<std::string> out;
        for (const Board& b : d4_transforms(Board::from_text(board))) out.push_back(b.text());
        return out;
      },
      py::arg("board"));

  m.def(
      "candidates",
      [](const std::vector<int>& history, const std::string& mode, const std::string& bot_mark,
         std::optional<bool> bot_started) {
        return decision_dict(candidates(context_arg(history, bot_mark, bot_started), mode_arg(mode)));
      },
      py::arg("history"), py::arg("mode") = "safe", py::arg("bot_mark") = "X", py::arg("bot_started") = py::none(),
      "T3DT support for the bot to move after the given cell sequence");
  m.def(
      "choose",
      [](const std::vector<int>& history, std::uint64_t seed, const std::string& mode, const std::string& bot_mark,
         std::optional<bool> bot_started) {
        RandomSource rng(seed);
        const auto [cell, rule] = choose(context_arg(history, bot_mark, bot_started), mode_arg(mode), rng);
        return py::make_tuple(cell.index(), std::string(to_string(rule)));
      },
      py::arg("history"), py::arg("seed"), py::arg("mode") = "safe", py::arg("bot_mark") = "X",
      py::arg("bot_started") = py::none());

  m.def(
      "search",
      [](const std::string& algo, const std::string& board) {
        auto a = parse_algorithm(algo);
        if (!a) throw py::value_error("algorithm must be mm, abp or aba");
        const Board b = Board::from_text(board);
        const SearchResult r = search(*a, b, b.to_move());
        py::dict out;
        out["cell"] = r.cell.index();
        out["score"] = r.score;
        out["nodes_visited"] = r.stats.nodes_visited;
        out["max_depth"] = r.stats.max_depth;
        return out;
      },
      py::arg("algorithm"), py::arg("board"));

  m.def(
      "play_game",
      [](const std::string& bot, const std::string& opp, const std::string& first, std::uint64_t seed,
         const std::string& mode) {
        auto b = policy_arg(bot, mode);
        auto o = policy_arg(opp, mode);
        RandomSource rng(seed);
        return play_game(*b, *o, first == "bot" ? Starter::Bot : Starter::Opponent, rng).transcript();
      },
      py::arg("bot"), py::arg("opponent"), py::arg("first") = "bot", py::arg("seed") = 0, py::arg("mode") = "safe",
      "Plays one game and returns its transcript");

  m.def("enumerate_games", [](unsigned threads) {
    const EnumerationCensus c = enumerate_games(threads);
    py::dict out;
    out["total_games"] = c.total_games;
    out["x_wins"] = c.x_wins;
    out["o_wins"] = c.o_wins;
    out["draws"] = c.draws;
    out["games_by_length"] = c.games_by_length;
    return out;
  }, py::arg("threads") = 1);

  m.def(
      "verify_no_loss",
      [](const std::string& policy, const std::string& role, const std::string& mode) {
        auto p = policy_arg(policy, mode);
        auto r = parse_role(role);
        if (!r) throw py::value_error("role must be first, second or both");
        VerificationReport rep;
        {
          py::gil_scoped_release release;
          rep = verify_no_loss(*p, *r);
        }
        py::dict out;
        out["wins"] = rep.wins;
        out["draws"] = rep.draws;
        out["loss_count"] = rep.loss_count;
        out["branch_nodes"] = rep.branch_nodes;
        std::vector<std::string> losses;
        for (const auto& rec : rep.losses) losses.push_back(rec.transcript());
        out["losses"] = losses;
        return out;
      },
      py::arg("policy"), py::arg("role") = "both", py::arg("mode") = "safe");

  m.def(
      "tpm", [](const std::vector<std::vector<std::int64_t>>& rows, int j) { return tpm(matrix_arg(rows), j); },
      py::arg("matrix"), py::arg("move"));
  m.def(
      "tpg",
      [](const std::vector<std::vector<std::int64_t>>& rows) {
        const TpgStats s = tpg(matrix_arg(rows));
        return py::make_tuple(s.mean, s.std, s.per_game);
      },
      py::arg("matrix"), "(mean, sample std or None, per-game totals)");
  m.def("speedup", &speedup, py::arg("tpg_reference"), py::arg("tpg_subject"));
}
