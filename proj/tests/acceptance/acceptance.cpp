// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "t3dt/bench.hpp"
#include "t3dt/minimax.hpp"
#include "t3dt/policy.hpp"
#include "t3dt/verify.hpp"

using namespace t3dt;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %-22s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

std::string sig3(double v) { return fmt("%.2E", v); }

int sign(int v) { return (v > 0) - (v < 0); }

void enumerate_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  const EnumerationCensus c = enumerate_games();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report("enumerate-total", c.total_games == 255168 && secs < 5.0,
         fmt("total=%llu in %.3f s (need 255168 in < 5 s)", static_cast<unsigned long long>(c.total_games), secs));
  const double ratio = c.win_ratio();
  report("win-ratio", std::abs(ratio - 1.68) <= 0.01,
         fmt("x_wins/o_wins=%llu/%llu=%.4f (need 1.68 +/- 0.01)", static_cast<unsigned long long>(c.x_wins),
             static_cast<unsigned long long>(c.o_wins), ratio));
}

void verify_criteria() {
  const VerificationReport safe = verify_no_loss(T3dtPolicy(PolicyMode::Safe), Role::Both);
  const fs::path artifact = fs::path(T3DT_SOURCE_DIR) / "reports" / "verify_t3dt_strict_both.json";
  bool artifact_ok = false;
  std::string artifact_note = "missing";
  if (std::ifstream in(artifact); in) {
    const auto j = nlohmann::json::parse(in, nullptr, false);
    artifact_ok = !j.is_discarded() && j.value("mode", "") == "strict" && j.value("role", "") == "both";
    artifact_note = artifact_ok ? fmt("present, loss_count=%llu", j.value("loss_count", 0ULL)) : "malformed";
  }
  report("verify-t3dt-safe", safe.no_loss() && artifact_ok,
         fmt("safe/both wins=%llu draws=%llu losses=%llu; strict report %s",
             static_cast<unsigned long long>(safe.wins), static_cast<unsigned long long>(safe.draws),
             static_cast<unsigned long long>(safe.loss_count), artifact_note.c_str()));

  const T3dtPolicy p(PolicyMode::Safe);
  const VerificationReport ce = verify_branch(p, CellClass::Corner, CellClass::Edge);
  const VerificationReport cc = verify_branch(p, CellClass::Corner, CellClass::Corner);
  const VerificationReport me = verify_branch(p, CellClass::Centre, CellClass::Edge);
  auto pct = [](const VerificationReport& r) { return 100.0 * double(r.wins) / double(r.leaves()); };
  report("forced-win-branches", ce.wins == ce.leaves() && cc.wins == cc.leaves() && me.wins == me.leaves(),
         fmt("C-EDGE %.1f%% of %llu, C-CORNER %.1f%% of %llu, M-EDGE %.1f%% of %llu bot wins", pct(ce),
             static_cast<unsigned long long>(ce.leaves()), pct(cc), static_cast<unsigned long long>(cc.leaves()),
             pct(me), static_cast<unsigned long long>(me.leaves())));

  bool no_loss = true;
  std::string detail;
  for (auto algo : {SearchAlgorithm::Minimax, SearchAlgorithm::AlphaBeta, SearchAlgorithm::AlphaBetaDepth}) {
    const VerificationReport r = verify_no_loss(MinimaxPolicy(algo), Role::Both);
    no_loss = no_loss && r.no_loss();
    detail += fmt("%s losses=%llu; ", std::string(to_string(algo)).c_str(),
                  static_cast<unsigned long long>(r.loss_count));
  }
  std::size_t positions = 0, disagreements = 0;
  for (Mark first : {Mark::X, Mark::O}) {
    for (const Board& b : reachable_boards(first)) {
      if (is_terminal(b)) continue;
      ++positions;
      const int mm = mm_move(b, b.to_move()).score;
      const int abp = abp_move(b, b.to_move()).score;
      const int aba = aba_move(b, b.to_move()).score;
      if (sign(mm) != sign(abp) || sign(mm) != sign(aba)) ++disagreements;
    }
  }
  report("search-baselines", no_loss && disagreements == 0,
         detail + fmt("sign disagreements %zu/%zu positions", disagreements, positions));
}

void figure_position() {
  const Board b = Board::from_text("OOX.X..O.");
  const SearchResult aba = aba_move(b, Mark::X);
  // Opponent opened in the corner; any history reaching this board gives the same WIN support.
  GameContext ctx(Mark::X, false);
  for (int c : {0, 4, 1, 2, 7}) ctx = ctx.after(Cell(c));
  const Decision d = candidates(ctx, PolicyMode::Safe);
  std::string support;
  for (Cell c : d.candidates) support += c.display();
  const bool ok = aba.cell == Cell::at(3, 1) && d.candidates == CellSet::of(Cell::at(3, 1));
  report("quick-win-position", ok,
         fmt("aba_move=%s T3DT support=%s rule=%s (need (3,1))", aba.cell.display().c_str(), support.c_str(),
             std::string(to_string(d.rule)).c_str()));
}

void bench_criteria(const fs::path& out_dir, std::size_t games) {
  const double s = speedup(6.96e9, 3.55e5);

  BenchConfig cfg;
  cfg.games = games;
  cfg.warmup_games = 50;
  cfg.seed = 2024;
  const auto matrices = run_selfplay(cfg);
  std::vector<TimingMatrix> list;
  for (const auto& [a, m] : matrices) list.push_back(m);
  const MetricsReport rep = analyze(list);
  export_reports(matrices, rep, cfg, out_dir);

  double worst = 0.0;
  for (const auto& m : list) {
    double sum = 0.0;
    for (double v : tpm_vector(m)) sum += v;
    const double mean = tpg(m).mean;
    worst = std::max(worst, std::abs(sum - mean) / mean);
  }
  report("speedup-and-sums", sig3(s) == "1.96E+04" && worst < 1e-9,
         fmt("speedup(6.96E9,3.55E5)=%s; max |sum TPM - TPG|/TPG=%.1e", sig3(s).c_str(), worst));

  const double t3 = rep.find("T3DT")->tpg_mean;
  const double mm = rep.find("MM")->tpg_mean;
  const double abp = rep.find("ABP")->tpg_mean;
  report("bench-speedups", mm / t3 >= 100.0 && abp / t3 >= 5.0,
         fmt("%zu games, 50 warm-up: TPG MM/T3DT=%.1f (>=100), ABP/T3DT=%.2f (>=5); TPG T3DT=%s ns", games, mm / t3,
             abp / t3, sig3(t3).c_str()));

  auto flatness = [](const AlgorithmMetrics& a) {
    double lo = 1e300, hi = 0.0;
    for (double v : a.tpm) {
      if (v <= 0.0) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi / lo;
  };
  const double f_t3 = flatness(*rep.find("T3DT"));
  const double f_mm = flatness(*rep.find("MM"));
  report("tpm-flatness", f_t3 <= 20.0 && f_mm > 1e3,
         fmt("max/min TPM: T3DT=%.2f (<=20), MM=%s (>1E3)", f_t3, sig3(f_mm).c_str()));
}

void opening_distribution() {
  const GameContext empty(Mark::X, true);
  RandomSource rng(12345);
  std::array<long, 9> counts{};
  const long n = 1'000'000;
  for (long i = 0; i < n; ++i) ++counts[choose(empty, PolicyMode::Safe, rng).first.index()];
  const double centre = counts[4] / double(n);
  double worst_corner = 0.0;
  for (int c : {0, 2, 6, 8}) worst_corner = std::max(worst_corner, std::abs(counts[c] / double(n) - 1.0 / 12.0));
  report("opening-distribution", std::abs(centre - 1.0 / 3.0) <= 0.005 && worst_corner <= 0.005,
         fmt("centre=%.4f (1/3 +/- 0.005), worst corner deviation=%.4f (<= 0.005)", centre, worst_corner));
}

void equivariance() {
  // Random playouts; keep bot-to-move contexts where a tree, fork or forced rule fires.
  RandomSource rng(777);
  const RandomPolicy rnd;
  int sampled = 0, violations = 0;
  while (sampled < 100) {
    const bool started = rng() % 2 == 0;
    GameContext ctx(Mark::X, started);
    const int stop = static_cast<int>(rng() % 8);
    for (int k = 0; k < stop && !is_terminal(ctx.board()); ++k) ctx = ctx.after(sample(rnd.decide(ctx), rng));
    if (is_terminal(ctx.board()) || !ctx.bot_to_move()) continue;
    const Decision d = candidates(ctx, PolicyMode::Safe);
    if (d.rule == RuleId::RandomFill || d.rule == RuleId::FirstRandom) continue;
    ++sampled;
    for (const Symmetry& s : d4()) {
      const Decision img = candidates(ctx.transformed(s), PolicyMode::Safe);
      if (img.rule != d.rule || img.candidates != s.apply(d.candidates)) ++violations;
    }
  }
  report("d4-equivariance", violations == 0, fmt("%d contexts x 8 transforms, %d violations", sampled, violations));
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out_dir = "acceptance_bench";
  std::size_t games = 1000;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--out") == 0) out_dir = argv[i + 1];
    else if (std::strcmp(argv[i], "--games") == 0) games = std::stoul(argv[i + 1]);
  }

  enumerate_criteria();
  verify_criteria();
  figure_position();
  bench_criteria(out_dir, games);
  opening_distribution();
  equivariance();

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
