#include "t3dt/service.hpp"

#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <random>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "t3dt/bench.hpp"

namespace t3dt {

struct PlayService::Session {
  Session(std::string id_, Starter first_, PolicyMode mode_, std::uint64_t seed_)
      : id(std::move(id_)), first(first_), mode(mode_), seed(seed_), rng(seed_),
        ctx(Mark::X, first_ == Starter::Bot) {}

  const std::string id;
  const Starter first;
  const PolicyMode mode;
  const std::uint64_t seed;

  std::mutex mu;  // guards everything below
  RandomSource rng;
  GameContext ctx;
  GameRecord record;
  std::optional<BotMove> last_bot_move;
  Clock::time_point last_used = Clock::now();

  void apply(Cell c, std::optional<RuleId> rule) {
    record.plies.push_back({static_cast<int>(record.plies.size()) + 1, ctx.board().to_move(), c, rule});
    ctx = ctx.after(c);
    record.outcome = outcome(ctx.board());
  }

  void bot_turn() {
    const auto [cell, rule] = choose(ctx, mode, rng);
    apply(cell, rule);
    last_bot_move = BotMove{cell, rule};
  }

  SessionView view() const {
    SessionView v;
    v.game_id = id;
    v.board = ctx.board().text();
    v.status = outcome(ctx.board());
    v.bot_move = last_bot_move;
    v.mode = mode;
    v.seed = seed;
    v.first = first;
    v.moves = record;
    return v;
  }
};

PlayService::PlayService() : PlayService(Options{}) {}

PlayService::PlayService(Options opts) : opts_(opts), id_salt_(std::random_device{}()) {
  if (opts_.sweep_interval.count() > 0) {
    sweeper_ = std::jthread([this](std::stop_token stop) {
      std::mutex m;
      std::condition_variable_any cv;
      std::unique_lock lock(m);
      while (!stop.stop_requested()) {
        cv.wait_for(lock, stop, opts_.sweep_interval, [] { return false; });
        if (!stop.stop_requested()) evict_idle(Clock::now());
      }
    });
  }
}

PlayService::~PlayService() = default;

std::string PlayService::next_id() {
  const std::uint64_t n = ++counter_;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "g%llx-%08llx", static_cast<unsigned long long>(n),
                static_cast<unsigned long long>((id_salt_ * 0x9E3779B97F4A7C15ULL + n) >> 32));
  return buf;
}

SessionView PlayService::create_game(Starter first, PolicyMode mode, std::optional<std::uint64_t> seed) {
  evict_idle(Clock::now());
  const std::uint64_t s = seed.value_or((static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}());
  std::shared_ptr<Session> session;
  {
    std::unique_lock lock(mu_);
    session = std::make_shared<Session>(next_id(), first, mode, s);
    sessions_.emplace(session->id, session);
  }
  std::lock_guard guard(session->mu);
  if (first == Starter::Bot) session->bot_turn();
  return session->view();
}

std::shared_ptr<PlayService::Session> PlayService::find(std::string_view id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown game");
  return it->second;
}

SessionView PlayService::play(std::string_view id, int cell) {
  auto session = find(id);
  std::unique_lock guard(session->mu, std::try_to_lock);
  if (!guard.owns_lock()) throw ServiceError(409, "another request on this game is in flight");
  session->last_used = Clock::now();

  if (cell < 0 || cell > 8) throw ServiceError(400, "cell must be an integer in 0..8");
  if (is_terminal(session->ctx.board())) throw ServiceError(409, "game finished");
  if (session->ctx.bot_to_move()) throw ServiceError(409, "not the human's turn");
  const Cell c(cell);
  if (!session->ctx.board().is_empty(c)) throw ServiceError(409, "illegal move: cell is occupied");

  session->apply(c, std::nullopt);
  session->last_bot_move.reset();
  if (!is_terminal(session->ctx.board())) session->bot_turn();
  return session->view();
}

SessionView PlayService::get(std::string_view id) const {
  auto session = find(id);
  std::lock_guard guard(session->mu);
  return session->view();
}

std::size_t PlayService::session_count() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::size_t PlayService::evict_idle(Clock::time_point now) {
  std::unique_lock lock(mu_);
  std::size_t evicted = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock s(it->second->mu, std::try_to_lock);
    if (s.owns_lock() && now - it->second->last_used > opts_.idle_ttl) {
      s.unlock();
      it = sessions_.erase(it);
      ++evicted;
    } else {
      ++it;
    }
  }
  return evicted;
}

std::string to_json(const SessionView& v, bool full) {
  nlohmann::ordered_json j;
  j["game_id"] = v.game_id;
  j["board"] = v.board;
  j["status"] = std::string(to_string(v.status));
  if (v.bot_move) j["bot_move"] = {{"cell", v.bot_move->cell.index()}, {"rule", std::string(to_string(v.bot_move->rule))}};
  if (full) {
    j["first_player"] = v.first == Starter::Bot ? "bot" : "human";
    j["mode"] = std::string(to_string(v.mode));
    j["seed"] = v.seed;
    auto moves = nlohmann::ordered_json::array();
    for (const auto& p : v.moves.plies) {
      nlohmann::ordered_json m = {{"ply", p.ply}, {"mark", std::string(1, to_char(p.mark))}, {"cell", p.cell.index()}};
      if (p.rule) m["rule"] = std::string(to_string(*p.rule));
      moves.push_back(std::move(m));
    }
    j["moves"] = std::move(moves);
  }
  return j.dump();
}

namespace {

void reply_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
}

template <class Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    reply_error(res, e.status(), e.what());
  } catch (const nlohmann::json::exception& e) {
    reply_error(res, 400, std::string("malformed JSON: ") + e.what());
  } catch (const std::exception& e) {
    reply_error(res, 500, e.what());
  }
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  auto j = nlohmann::json::parse(req.body);
  if (!j.is_object()) throw ServiceError(400, "body must be a JSON object");
  return j;
}

}  // namespace

void mount_routes(httplib::Server& server, PlayService& service) {
  server.Post("/api/games", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      const auto first = body.value("first_player", std::string());
      if (first != "bot" && first != "human") throw ServiceError(400, "first_player must be \"bot\" or \"human\"");
      const auto mode = parse_mode(body.value("mode", std::string("safe")));
      if (!mode) throw ServiceError(400, "mode must be \"strict\" or \"safe\"");
      std::optional<std::uint64_t> seed;
      if (body.contains("seed") && !body["seed"].is_null()) {
        if (!body["seed"].is_number_unsigned()) throw ServiceError(400, "seed must be a non-negative integer");
        seed = body["seed"].get<std::uint64_t>();
      }
      const auto view = service.create_game(first == "bot" ? Starter::Bot : Starter::Opponent, *mode, seed);
      res.status = 201;
      res.set_content(to_json(view, false), "application/json");
    });
  });

  server.Post(R"(/api/games/([^/]+)/moves)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      if (!body.contains("cell") || !body["cell"].is_number_integer())
        throw ServiceError(400, "cell must be an integer in 0..8");
      const auto view = service.play(req.matches[1].str(), body["cell"].get<int>());
      res.status = 200;
      res.set_content(to_json(view, false), "application/json");
    });
  });

  server.Get(R"(/api/games/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto view = service.get(req.matches[1].str());
      res.status = 200;
      res.set_content(to_json(view, true), "application/json");
    });
  });
}

bool serve(PlayService& service, const std::string& host, int port) {
  ServingScope scope;
  httplib::Server server;
  mount_routes(server, service);
  return server.listen(host, port);
}

}  // namespace t3dt
