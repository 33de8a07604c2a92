#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>

#include "t3dt/game.hpp"
#include "t3dt/policy.hpp"

namespace httplib {
class Server;
}

namespace t3dt {

/// Error carrying the HTTP status the API maps it to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

struct BotMove {
  Cell cell;
  RuleId rule;
};

struct SessionView {
  std::string game_id;
  std::string board;
  Outcome status = Outcome::Ongoing;
  std::optional<BotMove> bot_move;
  PolicyMode mode = PolicyMode::Safe;
  std::uint64_t seed = 0;
  Starter first = Starter::Opponent;
  GameRecord moves;
};

/// In-memory game sessions: the bot plays X, the human plays O. Each
/// session admits one request at a time; a concurrent request on the same
/// session is rejected with 409 rather than queued.
class PlayService {
 public:
  using Clock = std::chrono::steady_clock;

  struct Options {
    std::chrono::seconds idle_ttl{30 * 60};
    /// Zero disables the background sweeper; eviction then only happens
    /// through evict_idle().
    std::chrono::seconds sweep_interval{60};
  };

  PlayService();
  explicit PlayService(Options opts);
  ~PlayService();

  SessionView create_game(Starter first, PolicyMode mode, std::optional<std::uint64_t> seed);
  SessionView play(std::string_view id, int cell);
  SessionView get(std::string_view id) const;

  std::size_t session_count() const;
  std::size_t evict_idle(Clock::time_point now);

 private:
  struct Session;

  std::shared_ptr<Session> find(std::string_view id) const;
  std::string next_id();

  Options opts_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t id_salt_;
  std::jthread sweeper_;
};

/// JSON body for create/move responses (`full` = false) or the GET view.
std::string to_json(const SessionView& v, bool full);

/// Registers POST /api/games, POST /api/games/{id}/moves and
/// GET /api/games/{id} on `server`.
void mount_routes(httplib::Server& server, PlayService& service);

/// Blocks serving on host:port until the server is stopped. Returns false
/// if the port cannot be bound.
bool serve(PlayService& service, const std::string& host, int port);

}  // namespace t3dt
