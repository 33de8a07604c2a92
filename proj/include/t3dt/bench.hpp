#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "t3dt/policy.hpp"

namespace t3dt {

enum class Algorithm : std::uint8_t { MM, ABP, ABA, T3DT };

std::string_view to_string(Algorithm a) noexcept;  // "MM", "ABP", "ABA", "T3DT"
/// Accepts either case: "mm", "ABP", "t3dt", ...
std::optional<Algorithm> parse_bench_algorithm(std::string_view text);
/// Comma-separated list; throws GameError on unknown or duplicate names.
std::vector<Algorithm> parse_algorithm_list(std::string_view text);

struct Environment {
  std::string host;
  std::string build_profile;
  std::string compiler;
  std::string timestamp;  // UTC, ISO 8601
};

Environment current_environment();

/// Ng x 9 nanoseconds; entry (i, j) is the time the algorithm took to pick
/// move j of game i, or 0 when game i ended before move j.
class TimingMatrix {
 public:
  using Row = std::array<std::int64_t, 9>;

  TimingMatrix(std::string algorithm, std::vector<Row> rows, Environment env = {});

  const std::string& algorithm() const noexcept { return algorithm_; }
  const Environment& environment() const noexcept { return env_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t games() const noexcept { return rows_.size(); }
  /// `move` is 1-based.
  std::int64_t at(std::size_t game, int move) const;
  /// Games that reached each move.
  std::array<std::size_t, 9> participation() const;

 private:
  std::string algorithm_;
  std::vector<Row> rows_;
  Environment env_;
};

struct BenchConfig {
  std::size_t games = 10000;
  std::size_t warmup_games = 50;
  std::vector<Algorithm> algorithms{Algorithm::MM, Algorithm::ABP, Algorithm::ABA, Algorithm::T3DT};
  std::uint64_t seed = 0;
  PolicyMode mode = PolicyMode::Safe;
};

/// Self-play timing. Each algorithm plays both sides of `warmup_games`
/// discarded games followed by `games` recorded ones; only move selection
/// sits inside the timed region.
std::map<Algorithm, TimingMatrix> run_selfplay(const BenchConfig& cfg);

/// Mean of column j (1-based) over all Ng games, zero-filled rows included.
double tpm(const TimingMatrix& m, int j);
std::array<double, 9> tpm_vector(const TimingMatrix& m);

struct TpgStats {
  double mean = 0.0;
  std::optional<double> std;  // sample (n-1) deviation; absent for Ng < 2
  std::vector<double> per_game;
};

TpgStats tpg(const TimingMatrix& m);
/// Throws GameError when fewer than two games were recorded.
double tpg_std(const TimingMatrix& m);

/// TPG(reference) / TPG(subject): how many times faster the subject is.
double speedup(double tpg_reference, double tpg_subject);

struct AlgorithmMetrics {
  std::string algorithm;
  std::size_t games = 0;
  std::array<double, 9> tpm{};
  std::array<std::size_t, 9> participation{};
  double tpg_mean = 0.0;
  std::optional<double> tpg_std;
};

struct MetricsReport {
  std::vector<AlgorithmMetrics> algorithms;
  /// (reference, subject) -> speedup of subject over reference.
  std::map<std::pair<std::string, std::string>, double> speedups;

  const AlgorithmMetrics* find(std::string_view algorithm) const;
  /// Per-move table, TPG/std table and speedup table as plain text.
  std::string table() const;
  std::string to_json(const BenchConfig& cfg, const Environment& env) const;
};

MetricsReport analyze(const std::vector<TimingMatrix>& matrices);

/// `game_index,move_index,ns`, one row per played move, indices 1-based.
void write_csv(const TimingMatrix& m, const std::filesystem::path& path);
TimingMatrix read_csv(const std::filesystem::path& path, std::string algorithm);

struct ExportedFiles {
  std::vector<std::filesystem::path> csvs;
  std::filesystem::path report;
  std::filesystem::path table;
};

ExportedFiles export_reports(const std::map<Algorithm, TimingMatrix>& matrices, const MetricsReport& report,
                             const BenchConfig& cfg, const std::filesystem::path& dir);

/// Held while an HTTP service runs in this process; run_selfplay refuses
/// to start meanwhile.
class ServingScope {
 public:
  ServingScope();
  ~ServingScope();
  ServingScope(const ServingScope&) = delete;
  ServingScope& operator=(const ServingScope&) = delete;
};

bool serving_active() noexcept;

}  // namespace t3dt
