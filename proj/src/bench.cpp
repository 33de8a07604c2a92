#include "t3dt/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "t3dt/game.hpp"
#include "t3dt/minimax.hpp"

#ifndef T3DT_BUILD_PROFILE
#define T3DT_BUILD_PROFILE "unknown"
#endif

namespace t3dt {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::MM: return "MM";
    case Algorithm::ABP: return "ABP";
    case Algorithm::ABA: return "ABA";
    case Algorithm::T3DT: return "T3DT";
  }
  return "?";
}

std::optional<Algorithm> parse_bench_algorithm(std::string_view text) {
  std::string upper(text);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (auto a : {Algorithm::MM, Algorithm::ABP, Algorithm::ABA, Algorithm::T3DT})
    if (to_string(a) == upper) return a;
  return std::nullopt;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    auto a = parse_bench_algorithm(item);
    if (!a) throw GameError("unknown algorithm '" + std::string(item) + "'");
    if (std::find(out.begin(), out.end(), *a) != out.end())
      throw GameError("algorithm listed twice: " + std::string(item));
    out.push_back(*a);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Environment current_environment() {
  Environment env;
  char host[256] = {};
  if (gethostname(host, sizeof(host) - 1) == 0) env.host = host;
  env.build_profile = T3DT_BUILD_PROFILE;
#if defined(__clang__)
  env.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  env.compiler = "gcc " __VERSION__;
#else
  env.compiler = "unknown";
#endif
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  env.timestamp = buf;
  return env;
}

TimingMatrix::TimingMatrix(std::string algorithm, std::vector<Row> rows, Environment env)
    : algorithm_(std::move(algorithm)), rows_(std::move(rows)), env_(std::move(env)) {
  if (rows_.empty()) throw GameError("timing matrix needs at least one game");
  for (const Row& r : rows_) {
    bool ended = false;
    for (std::int64_t v : r) {
      if (v < 0) throw GameError("negative timing entry");
      if (v == 0) ended = true;
      else if (ended) throw GameError("timing row has a move after the game ended");
    }
    if (r[0] == 0) throw GameError("timing row has no moves");
  }
}

std::int64_t TimingMatrix::at(std::size_t game, int move) const {
  if (move < 1 || move > 9) throw GameError("move index must be in 1..9");
  return rows_.at(game)[move - 1];
}

std::array<std::size_t, 9> TimingMatrix::participation() const {
  std::array<std::size_t, 9> out{};
  for (const Row& r : rows_)
    for (std::size_t j = 0; j < 9; ++j)
      if (r[j] > 0) ++out[j];
  return out;
}

namespace {

std::atomic<int> g_serving{0};

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point t0, Clock::time_point t1) {
  // A played move never records 0: that value marks "game over".
  return std::max<std::int64_t>(1, std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

TimingMatrix::Row t3dt_game(PolicyMode mode, RandomSource& rng) {
  TimingMatrix::Row row{};
  GameContext sides[2] = {GameContext(Mark::X, true), GameContext(Mark::O, false)};
  int ply = 0;
  while (!is_terminal(sides[0].board())) {
    GameContext& mover = sides[ply % 2];
    const auto t0 = Clock::now();
    const auto [cell, rule] = choose(mover, mode, rng);
    const auto t1 = Clock::now();
    row[ply] = elapsed_ns(t0, t1);
    sides[0] = sides[0].after(cell);
    sides[1] = sides[1].after(cell);
    ++ply;
  }
  return row;
}

TimingMatrix::Row search_game(SearchAlgorithm algo) {
  TimingMatrix::Row row{};
  Board b(Mark::X);
  int ply = 0;
  while (!is_terminal(b)) {
    const Mark m = b.to_move();
    const auto t0 = Clock::now();
    const SearchResult r = search(algo, b, m);
    const auto t1 = Clock::now();
    row[ply++] = elapsed_ns(t0, t1);
    b = b.play(r.cell);
  }
  return row;
}

TimingMatrix::Row play_timed(Algorithm a, PolicyMode mode, RandomSource& rng) {
  switch (a) {
    case Algorithm::MM: return search_game(SearchAlgorithm::Minimax);
    case Algorithm::ABP: return search_game(SearchAlgorithm::AlphaBeta);
    case Algorithm::ABA: return search_game(SearchAlgorithm::AlphaBetaDepth);
    case Algorithm::T3DT: return t3dt_game(mode, rng);
  }
  return {};
}

}  // namespace

std::map<Algorithm, TimingMatrix> run_selfplay(const BenchConfig& cfg) {
  if (serving_active()) throw std::runtime_error("benchmark refused: an HTTP service is running in this process");
  if (cfg.games < 1) throw GameError("bench needs at least one recorded game");
  if (cfg.algorithms.empty()) throw GameError("bench needs at least one algorithm");

  const Environment env = current_environment();
  std::map<Algorithm, TimingMatrix> out;
  for (Algorithm a : cfg.algorithms) {
    RandomSource rng(cfg.seed);
    for (std::size_t i = 0; i < cfg.warmup_games; ++i) play_timed(a, cfg.mode, rng);
    std::vector<TimingMatrix::Row> rows;
    rows.reserve(cfg.games);
    for (std::size_t i = 0; i < cfg.games; ++i) rows.push_back(play_timed(a, cfg.mode, rng));
    out.emplace(a, TimingMatrix(std::string(to_string(a)), std::move(rows), env));
  }
  return out;
}

double tpm(const TimingMatrix& m, int j) {
  if (j < 1 || j > 9) throw GameError("move index must be in 1..9");
  double sum = 0.0;
  for (const auto& r : m.rows()) sum += static_cast<double>(r[j - 1]);
  return sum / static_cast<double>(m.games());
}

std::array<double, 9> tpm_vector(const TimingMatrix& m) {
  std::array<double, 9> out{};
  for (int j = 1; j <= 9; ++j) out[j - 1] = tpm(m, j);
  return out;
}

TpgStats tpg(const TimingMatrix& m) {
  TpgStats s;
  s.per_game.reserve(m.games());
  double total = 0.0;
  for (const auto& r : m.rows()) {
    double row = 0.0;
    for (std::int64_t v : r) row += static_cast<double>(v);
    s.per_game.push_back(row);
    total += row;
  }
  const double n = static_cast<double>(m.games());
  s.mean = total / n;
  if (m.games() >= 2) {
    double ss = 0.0;
    for (double g : s.per_game) ss += (g - s.mean) * (g - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

double tpg_std(const TimingMatrix& m) {
  auto s = tpg(m).std;
  if (!s) throw GameError("standard deviation needs at least two games");
  return *s;
}

double speedup(double tpg_reference, double tpg_subject) {
  if (!(tpg_reference > 0.0) || !(tpg_subject > 0.0)) throw GameError("speedup needs positive TPG values");
  return tpg_reference / tpg_subject;
}

const AlgorithmMetrics* MetricsReport::find(std::string_view algorithm) const {
  for (const auto& a : algorithms)
    if (a.algorithm == algorithm) return &a;
  return nullptr;
}

MetricsReport analyze(const std::vector<TimingMatrix>& matrices) {
  MetricsReport rep;
  for (const TimingMatrix& m : matrices) {
    AlgorithmMetrics a;
    a.algorithm = m.algorithm();
    a.games = m.games();
    a.tpm = tpm_vector(m);
    a.participation = m.participation();
    const TpgStats s = tpg(m);
    a.tpg_mean = s.mean;
    a.tpg_std = s.std;
    rep.algorithms.push_back(std::move(a));
  }
  for (const auto& ref : rep.algorithms)
    for (const auto& sub : rep.algorithms)
      if (ref.algorithm != sub.algorithm)
        rep.speedups[{ref.algorithm, sub.algorithm}] = speedup(ref.tpg_mean, sub.tpg_mean);
  return rep;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2E", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string MetricsReport::table() const {
  std::ostringstream out;
  out << "TPM (ns) per move index\n";
  out << pad("Algorithm", 10);
  for (int j = 1; j <= 9; ++j) out << pad(std::to_string(j), 10);
  out << '\n';
  for (const auto& a : algorithms) {
    out << pad(a.algorithm, 10);
    for (double v : a.tpm) out << pad(sci(v), 10);
    out << '\n';
  }
  out << "\nTPG (ns)\n" << pad("Algorithm", 10) << pad("mean", 12) << pad("std", 12) << "games\n";
  for (const auto& a : algorithms) {
    out << pad(a.algorithm, 10) << pad(sci(a.tpg_mean), 12) << pad(a.tpg_std ? sci(*a.tpg_std) : "n/a", 12)
        << a.games << '\n';
  }
  if (!speedups.empty()) {
    out << "\nSpeedup (TPG reference / TPG subject)\n" << pad("reference", 12) << pad("subject", 12) << "speedup\n";
    for (const auto& [pair, v] : speedups) out << pad(pair.first, 12) << pad(pair.second, 12) << sci(v) << '\n';
  }
  return out.str();
}

std::string MetricsReport::to_json(const BenchConfig& cfg, const Environment& env) const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json config;
  config["games"] = cfg.games;
  config["warmup_games"] = cfg.warmup_games;
  auto algos = nlohmann::ordered_json::array();
  for (Algorithm a : cfg.algorithms) algos.push_back(std::string(to_string(a)));
  config["algorithms"] = algos;
  config["seed"] = cfg.seed;
  config["t3dt_mode"] = std::string(to_string(cfg.mode));
  j["config"] = config;
  j["environment"] = {{"host", env.host},
                      {"build_profile", env.build_profile},
                      {"compiler", env.compiler},
                      {"timestamp", env.timestamp}};
  auto per = nlohmann::ordered_json::object();
  for (const auto& a : algorithms) {
    nlohmann::ordered_json e;
    e["games"] = a.games;
    e["tpm_ns"] = a.tpm;
    e["participation"] = a.participation;
    e["tpg_mean_ns"] = a.tpg_mean;
    e["tpg_std_ns"] = a.tpg_std ? nlohmann::ordered_json(*a.tpg_std) : nlohmann::ordered_json(nullptr);
    per[a.algorithm] = e;
  }
  j["algorithms"] = per;
  auto sp = nlohmann::ordered_json::array();
  for (const auto& [pair, v] : speedups) sp.push_back({{"reference", pair.first}, {"subject", pair.second}, {"speedup", v}});
  j["speedups"] = sp;
  return j.dump(2);
}

void write_csv(const TimingMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "game_index,move_index,ns\n";
  for (std::size_t i = 0; i < m.games(); ++i)
    for (int j = 1; j <= 9; ++j)
      if (const auto v = m.at(i, j); v > 0) out << (i + 1) << ',' << j << ',' << v << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

TimingMatrix read_csv(const std::filesystem::path& path, std::string algorithm) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "game_index,move_index,ns") throw GameError("unexpected CSV header");
  std::vector<TimingMatrix::Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t game = 0;
    int move = 0;
    long long ns = 0;
    if (std::sscanf(line.c_str(), "%zu,%d,%lld", &game, &move, &ns) != 3 || game < 1 || move < 1 || move > 9)
      throw GameError("bad CSV row: " + line);
    if (rows.size() < game) rows.resize(game, TimingMatrix::Row{});
    rows[game - 1][move - 1] = ns;
  }
  return TimingMatrix(std::move(algorithm), std::move(rows));
}

ExportedFiles export_reports(const std::map<Algorithm, TimingMatrix>& matrices, const MetricsReport& report,
                             const BenchConfig& cfg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  ExportedFiles files;
  Environment env = matrices.empty() ? current_environment() : matrices.begin()->second.environment();
  for (const auto& [algo, m] : matrices) {
    std::string name(to_string(algo));
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto path = dir / ("timing_" + name + ".csv");
    write_csv(m, path);
    files.csvs.push_back(path);
  }
  files.report = dir / "report.json";
  files.table = dir / "report.txt";
  std::ofstream(files.report) << report.to_json(cfg, env) << '\n';
  std::ofstream txt(files.table);
  txt << report.table();
  if (!txt) throw std::runtime_error("cannot write " + files.table.string());
  return files;
}

ServingScope::ServingScope() { ++g_serving; }
ServingScope::~ServingScope() { --g_serving; }
bool serving_active() noexcept { return g_serving.load() > 0; }

}  // namespace t3dt
