#include "t3dt/verify.hpp"

#include <algorithm>
#include <set>
#include <thread>
#include <utility>

#include <json.hpp>

namespace t3dt {

void EnumerationCensus::merge(const EnumerationCensus& other) {
  total_games += other.total_games;
  x_wins += other.x_wins;
  o_wins += other.o_wins;
  draws += other.draws;
  for (const auto& [len, n] : other.games_by_length) games_by_length[len] += n;
}

std::string EnumerationCensus::to_json() const {
  nlohmann::ordered_json j;
  j["total_games"] = total_games;
  j["x_wins"] = x_wins;
  j["o_wins"] = o_wins;
  j["draws"] = draws;
  j["x_to_o_win_ratio"] = win_ratio();
  nlohmann::ordered_json lengths;
  for (const auto& [len, n] : games_by_length) lengths[std::to_string(len)] = n;
  j["games_by_length"] = lengths;
  return j.dump(2);
}

namespace {

void enumerate_from(const Board& b, EnumerationCensus& census) {
  const Outcome o = outcome(b);
  if (o != Outcome::Ongoing) {
    ++census.total_games;
    ++census.games_by_length[b.move_count()];
    if (o == Outcome::XWin) ++census.x_wins;
    else if (o == Outcome::OWin) ++census.o_wins;
    else ++census.draws;
    return;
  }
  for (Cell c : b.empty_cells()) enumerate_from(b.play(c), census);
}

}  // namespace

EnumerationCensus enumerate_games(unsigned threads) {
  const Board root(Mark::X);
  threads = std::clamp(threads, 1u, 9u);
  std::vector<EnumerationCensus> parts(threads);
  auto work = [&](unsigned t) {
    for (int i = static_cast<int>(t); i < 9; i += static_cast<int>(threads)) enumerate_from(root.play(Cell(i)), parts[t]);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  EnumerationCensus total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

std::vector<Board> reachable_boards(Mark first_mover) {
  std::set<std::pair<std::uint16_t, std::uint16_t>> seen;
  std::vector<Board> out;
  std::vector<Board> stack{Board(first_mover)};
  while (!stack.empty()) {
    Board b = stack.back();
    stack.pop_back();
    if (!seen.emplace(b.cells_of(Mark::X).bits(), b.cells_of(Mark::O).bits()).second) continue;
    out.push_back(b);
    if (is_terminal(b)) continue;
    for (Cell c : b.empty_cells()) stack.push_back(b.play(c));
  }
  return out;
}

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::First: return "first";
    case Role::Second: return "second";
    case Role::Both: return "both";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "first") return Role::First;
  if (text == "second") return Role::Second;
  if (text == "both") return Role::Both;
  return std::nullopt;
}

void VerificationReport::merge(const VerificationReport& other, std::size_t max_transcripts) {
  wins += other.wins;
  draws += other.draws;
  loss_count += other.loss_count;
  branch_nodes += other.branch_nodes;
  for (const auto& rec : other.losses) {
    if (losses.size() >= max_transcripts) break;
    losses.push_back(rec);
  }
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["policy"] = policy;
  j["mode"] = mode;
  j["role"] = std::string(to_string(role));
  j["no_loss"] = no_loss();
  j["wins"] = wins;
  j["draws"] = draws;
  j["loss_count"] = loss_count;
  j["branch_nodes"] = branch_nodes;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& rec : losses) {
    nlohmann::ordered_json l;
    l["final_board"] = rec.replay().text();
    l["transcript"] = rec.transcript();
    arr.push_back(std::move(l));
  }
  j["losses"] = std::move(arr);
  j["losses_truncated"] = loss_count > losses.size();
  return j.dump(2);
}

namespace {

class Verifier {
 public:
  Verifier(const Policy& policy, VerifyOptions opts) : policy_(policy), opts_(opts) {}

  void run(const GameContext& ctx) {
    GameRecord rec;
    for (const Move& m : ctx.history())
      rec.plies.push_back({static_cast<int>(rec.plies.size()) + 1, m.mark, m.cell, std::nullopt});
    walk(ctx, rec);
  }

  VerificationReport report;

 private:
  void walk(const GameContext& ctx, GameRecord& rec) {
    const Board& b = ctx.board();
    const Outcome o = outcome(b);
    if (o != Outcome::Ongoing) {
      if (o == Outcome::Draw) {
        ++report.draws;
      } else if (o == win_for(ctx.bot_mark())) {
        ++report.wins;
      } else {
        ++report.loss_count;
        if (report.losses.size() < opts_.max_transcripts) {
          GameRecord copy = rec;
          copy.outcome = o;
          report.losses.push_back(std::move(copy));
        }
      }
      return;
    }

    const Mark mover = b.to_move();
    std::optional<RuleId> rule;
    CellSet branches;
    if (ctx.bot_to_move()) {
      const Decision d = policy_.decide(ctx);
      if (d.candidates.empty() || !(d.candidates - b.empty_cells()).empty())
        throw IllegalMoveError(policy_.name() + " proposed an occupied cell", rec);
      branches = d.candidates;
      rule = d.rule;
    } else {
      branches = b.empty_cells();
    }

    for (Cell c : branches) {
      ++report.branch_nodes;
      rec.plies.push_back({static_cast<int>(rec.plies.size()) + 1, mover, c, rule});
      walk(ctx.after(c), rec);
      rec.plies.pop_back();
    }
  }

  const Policy& policy_;
  VerifyOptions opts_;
};

VerificationReport labelled(const Policy& policy, Role role) {
  VerificationReport r;
  r.policy = policy.name();
  r.mode = policy.mode();
  r.role = role;
  return r;
}

}  // namespace

VerificationReport verify_from(const Policy& policy, const GameContext& start, VerifyOptions opts) {
  Verifier v(policy, opts);
  v.report = labelled(policy, start.bot_started() ? Role::First : Role::Second);
  v.run(start);
  return std::move(v.report);
}

VerificationReport verify_no_loss(const Policy& policy, Role role, VerifyOptions opts) {
  if (role == Role::Both) {
    VerificationReport out = labelled(policy, Role::Both);
    out.merge(verify_no_loss(policy, Role::First, opts), opts.max_transcripts);
    out.merge(verify_no_loss(policy, Role::Second, opts), opts.max_transcripts);
    return out;
  }
  return verify_from(policy, GameContext(Mark::X, role == Role::First), opts);
}

VerificationReport verify_branch(const Policy& policy, CellClass opening, CellClass reply, VerifyOptions opts) {
  VerificationReport out = labelled(policy, Role::First);
  const GameContext root(Mark::X, true);
  for (Cell b1 : CellSet::all()) {
    if (classify(b1) != opening) continue;
    for (Cell p1 : CellSet::all()) {
      if (p1 == b1 || classify(p1) != reply) continue;
      out.merge(verify_from(policy, root.after(b1).after(p1), opts), opts.max_transcripts);
    }
  }
  return out;
}

std::optional<int> selfplay_plies_to_win(SearchAlgorithm algo, const Board& start, Cell first) {
  const Mark winner = start.to_move();
  Board b = start.play(first);
  int plies = 1;
  while (!is_terminal(b)) {
    b = b.play(search(algo, b, b.to_move()).cell);
    ++plies;
  }
  if (outcome(b) != win_for(winner)) return std::nullopt;
  return plies;
}

std::vector<OptimalityEntry> optimality_scan() {
  std::vector<OptimalityEntry> out;
  for (Mark first : {Mark::X, Mark::O}) {
    for (const Board& b : reachable_boards(first)) {
      if (is_terminal(b)) continue;
      const Mark mover = b.to_move();
      const SearchResult aba = aba_move(b, mover);
      if (aba.score <= 0) continue;
      const SearchResult mm = mm_move(b, mover);
      if (mm.cell == aba.cell) continue;
      const auto mm_plies = selfplay_plies_to_win(SearchAlgorithm::Minimax, b, mm.cell);
      const auto aba_plies = selfplay_plies_to_win(SearchAlgorithm::AlphaBetaDepth, b, aba.cell);
      if (!mm_plies || !aba_plies) throw std::logic_error("won position not converted by search self-play");
      if (*mm_plies > *aba_plies) out.push_back({b, mm.cell, aba.cell, *mm_plies, *aba_plies});
    }
  }
  return out;
}

}  // namespace t3dt
