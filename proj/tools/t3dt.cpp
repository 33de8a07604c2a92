// t3dt: play, verify, enumerate, bench and serve.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include <CLI11.hpp>

#include "t3dt/bench.hpp"
#include "t3dt/minimax.hpp"
#include "t3dt/service.hpp"
#include "t3dt/terminal.hpp"
#include "t3dt/verify.hpp"

namespace fs = std::filesystem;
using namespace t3dt;

namespace {

constexpr int kExitLosses = 1;
constexpr int kExitError = 2;

std::unique_ptr<Policy> make_policy(const std::string& name, PolicyMode mode) {
  if (name == "t3dt") return std::make_unique<T3dtPolicy>(mode);
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (auto algo = parse_algorithm(name)) return std::make_unique<MinimaxPolicy>(*algo);
  throw GameError("unknown policy '" + name + "'");
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

PolicyMode mode_of(const std::string& text) { return *parse_mode(text); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tic-tac-toe decision-tree bot: play, verify, enumerate, benchmark, serve"};
  app.require_subcommand(1);

  // play
  auto* play = app.add_subcommand("play", "Play against the bot in the terminal");
  std::string first = "human";
  std::optional<std::uint64_t> play_seed;
  std::string play_mode = "safe";
  play->add_option("--first", first, "Who moves first")->check(CLI::IsMember({"bot", "human"}));
  play->add_option("--seed", play_seed, "Random seed (printed when omitted)");
  play->add_option("--mode", play_mode, "Policy mode")->check(CLI::IsMember({"strict", "safe"}));

  // verify
  auto* verify = app.add_subcommand("verify", "Exhaustively check that a policy never loses");
  std::string policy_name;
  std::string role_name = "both";
  std::string verify_mode = "safe";
  std::string verify_out;
  std::size_t max_transcripts = 100;
  verify->add_option("--policy", policy_name, "t3dt, mm, abp, aba or random")
      ->required()
      ->check(CLI::IsMember({"t3dt", "mm", "abp", "aba", "random"}));
  verify->add_option("--role", role_name, "Seat of the policy")->check(CLI::IsMember({"first", "second", "both"}));
  verify->add_option("--mode", verify_mode, "T3DT mode")->check(CLI::IsMember({"strict", "safe"}));
  verify->add_option("--out", verify_out, "Report path (default verify_<policy>_<mode>_<role>.json)");
  verify->add_option("--max-transcripts", max_transcripts, "Losing lines kept in the report");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "Count every distinct game from the empty board");
  unsigned threads = 1;
  enumerate->add_option("--threads", threads, "Worker threads (1-9)")->check(CLI::Range(1, 9));

  // scan
  auto* scan = app.add_subcommand("scan", "List won positions where MM wins more slowly than ABA");

  // bench
  auto* bench = app.add_subcommand("bench", "Self-play timing of the algorithms");
  BenchConfig cfg;
  std::string algos = "mm,abp,aba,t3dt";
  std::string bench_out = "bench_out";
  bench->add_option("--games", cfg.games, "Recorded games per algorithm")->check(CLI::PositiveNumber);
  bench->add_option("--warmup", cfg.warmup_games, "Discarded warm-up games")->capture_default_str();
  bench->add_option("--algos", algos, "Comma-separated subset of mm,abp,aba,t3dt");
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--seed", cfg.seed, "Seed for T3DT's randomisation");
  std::string bench_mode = "safe";
  bench->add_option("--mode", bench_mode, "T3DT mode")->check(CLI::IsMember({"strict", "safe"}));

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "HTTP play API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", host, "Bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*play) {
      PlayOptions opts;
      opts.first = first == "bot" ? Starter::Bot : Starter::Opponent;
      opts.seed = play_seed.value_or(fresh_seed());
      opts.mode = mode_of(play_mode);
      return run_terminal_play(std::cin, std::cout, opts);
    }

    if (*verify) {
      const auto policy = make_policy(policy_name, mode_of(verify_mode));
      const Role role = *parse_role(role_name);
      const VerificationReport report = verify_no_loss(*policy, role, {max_transcripts});
      const std::string mode_part = policy->mode() == "-" ? "" : "_" + policy->mode();
      const fs::path out =
          verify_out.empty() ? fs::path("verify_" + policy_name + mode_part + "_" + role_name + ".json") : fs::path(verify_out);
      std::ofstream(out) << report.to_json() << '\n';
      std::cout << "policy=" << report.policy << " mode=" << report.mode << " role=" << to_string(report.role)
                << " wins=" << report.wins << " draws=" << report.draws << " losses=" << report.loss_count
                << " branch_nodes=" << report.branch_nodes << "\nreport: " << out.string() << '\n';
      if (!report.no_loss()) {
        fs::path lines = out;
        lines.replace_extension(".losses.txt");
        std::ofstream tx(lines);
        for (const auto& rec : report.losses) tx << rec.transcript() << '\n';
        std::cout << "losing transcripts: " << lines.string() << '\n';
        return kExitLosses;
      }
      return 0;
    }

    if (*enumerate) {
      std::cout << enumerate_games(threads).to_json() << '\n';
      return 0;
    }

    if (*scan) {
      const auto entries = optimality_scan();
      std::cout << "board      mm_cell aba_cell plies_mm plies_aba\n";
      for (const auto& e : entries)
        std::cout << e.board.text() << "  " << e.mm_cell.display() << "   " << e.aba_cell.display() << "    "
                  << e.plies_to_win_mm << "        " << e.plies_to_win_aba << '\n';
      std::cout << "positions: " << entries.size() << '\n';
      return 0;
    }

    if (*bench) {
      cfg.algorithms = parse_algorithm_list(algos);
      cfg.mode = mode_of(bench_mode);
      const auto matrices = run_selfplay(cfg);
      std::vector<TimingMatrix> list;
      for (const auto& [a, m] : matrices) list.push_back(m);
      const MetricsReport report = analyze(list);
      const auto files = export_reports(matrices, report, cfg, bench_out);
      std::cout << report.table() << "\nreport: " << files.report.string() << '\n';
      return 0;
    }

    if (*serve_cmd) {
      PlayService service;
      std::cout << "serving on http://" << host << ':' << port << std::endl;
      if (!serve(service, host, port)) {
        std::cerr << "cannot bind " << host << ':' << port << '\n';
        return kExitError;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
