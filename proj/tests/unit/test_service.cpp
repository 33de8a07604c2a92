#include <doctest.h>

#include <atomic>
#include <barrier>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "t3dt/service.hpp"

using namespace t3dt;
using nlohmann::json;

namespace {

PlayService::Options no_sweeper() {
  PlayService::Options o;
  o.sweep_interval = std::chrono::seconds(0);
  return o;
}

// Real server on an ephemeral port for the lifetime of the fixture.
struct LiveServer {
  PlayService service{no_sweeper()};
  httplib::Server server;
  std::thread thread;
  int port = 0;

  LiveServer() {
    mount_routes(server, service);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json body(const httplib::Result& r) { return json::parse(r->body); }

}  // namespace

TEST_CASE("service core: turn order and errors") {
  PlayService svc(no_sweeper());
  const SessionView v = svc.create_game(Starter::Opponent, PolicyMode::Safe, 42);
  CHECK(v.board == ".........");
  CHECK_FALSE(v.bot_move.has_value());
  const SessionView after = svc.play(v.game_id, 0);
  CHECK(after.board == "O...X....");
  REQUIRE(after.bot_move.has_value());
  CHECK(after.bot_move->rule == RuleId::OCorner);

  auto status_of = [&](auto&& fn) {
    try {
      fn();
    } catch (const ServiceError& e) {
      return e.status();
    }
    return 0;
  };
  CHECK(status_of([&] { svc.play(v.game_id, 0); }) == 409);
  CHECK(status_of([&] { svc.play(v.game_id, 9); }) == 400);
  CHECK(status_of([&] { svc.play("nope", 1); }) == 404);
  CHECK(status_of([&] { svc.get("nope"); }) == 404);

  const SessionView full = svc.get(v.game_id);
  CHECK(full.moves.plies.size() == 2);
  CHECK(full.seed == 42);
}

TEST_CASE("same seed, same game") {
  PlayService svc(no_sweeper());
  const auto a = svc.create_game(Starter::Bot, PolicyMode::Safe, 9);
  const auto b = svc.create_game(Starter::Bot, PolicyMode::Safe, 9);
  CHECK(a.game_id != b.game_id);
  CHECK(a.board == b.board);
  CHECK(a.bot_move->rule == RuleId::FirstRandom);
}

TEST_CASE("idle sessions are evicted") {
  PlayService::Options o = no_sweeper();
  o.idle_ttl = std::chrono::seconds(10);
  PlayService svc(o);
  svc.create_game(Starter::Bot, PolicyMode::Safe, 1);
  CHECK(svc.session_count() == 1);
  CHECK(svc.evict_idle(PlayService::Clock::now()) == 0);
  CHECK(svc.evict_idle(PlayService::Clock::now() + std::chrono::seconds(11)) == 1);
  CHECK(svc.session_count() == 0);
}

TEST_CASE("HTTP API") {
  LiveServer live;
  auto cli = live.client();

  SUBCASE("bot first") {
    auto r = cli.Post("/api/games", R"({"first_player":"bot","mode":"safe","seed":5})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 201);
    const json j = body(r);
    CHECK(j["board"].get<std::string>().size() == 9);
    CHECK(j["status"] == "Ongoing");
    CHECK(j["bot_move"]["rule"] == "FIRST_RANDOM");
    const std::string id = j["game_id"];
    const int bot_cell = j["bot_move"]["cell"];

    r = cli.Post("/api/games/" + id + "/moves", json{{"cell", bot_cell}}.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 409);

    r = cli.Get("/api/games/" + id);
    REQUIRE(r);
    CHECK(r->status == 200);
    const json full = body(r);
    CHECK(full["moves"].size() == 1);
    CHECK(full["first_player"] == "bot");
    CHECK(full["mode"] == "safe");
  }

  SUBCASE("a full game ends and then rejects moves") {
    auto r = cli.Post("/api/games", R"({"first_player":"human","seed":1})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 201);
    json j = body(r);
    CHECK_FALSE(j.contains("bot_move"));
    const std::string id = j["game_id"];
    std::string board = j["board"];
    while (j["status"] == "Ongoing") {
      const int cell = static_cast<int>(board.find('.'));
      r = cli.Post("/api/games/" + id + "/moves", json{{"cell", cell}}.dump(), "application/json");
      REQUIRE(r);
      REQUIRE(r->status == 200);
      j = body(r);
      board = j["board"];
    }
    CHECK(j["status"] != "OWin");
    const auto free_cell = board.find('.');
    r = cli.Post("/api/games/" + id + "/moves", json{{"cell", free_cell == std::string::npos ? 0 : int(free_cell)}}.dump(),
                 "application/json");
    REQUIRE(r);
    CHECK(r->status == 409);
  }

  SUBCASE("bad requests") {
    auto r = cli.Post("/api/games", R"({"first_player":"alien"})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    r = cli.Post("/api/games", "{not json", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    r = cli.Post("/api/games", R"({"first_player":"bot","mode":"greedy"})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    r = cli.Post("/api/games/unknown/moves", R"({"cell":1})", "application/json");
    REQUIRE(r);
    CHECK(r->status == 404);
    r = cli.Get("/api/games/unknown");
    REQUIRE(r);
    CHECK(r->status == 404);
    CHECK(body(r).contains("error"));
  }
}

TEST_CASE("concurrent moves on one session: exactly one applies") {
  LiveServer live;
  int successes = 0;
  for (int round = 0; round < 20; ++round) {
    auto cli = live.client();
    auto r = cli.Post("/api/games", R"({"first_player":"human"})", "application/json");
    REQUIRE(r);
    const std::string id = body(r)["game_id"];

    std::array<int, 2> status{};
    std::barrier sync(2);
    auto shoot = [&](int k, int cell) {
      auto c = live.client();
      sync.arrive_and_wait();
      auto res = c.Post("/api/games/" + id + "/moves", json{{"cell", cell}}.dump(), "application/json");
      status[k] = res ? res->status : -1;
    };
    std::thread a(shoot, 0, 0), b(shoot, 1, 0);
    a.join();
    b.join();
    // Same cell twice: one applies, the other is rejected as busy or occupied.
    CHECK(((status[0] == 200 && status[1] == 409) || (status[0] == 409 && status[1] == 200)));
    successes += (status[0] == 200) + (status[1] == 200);

    r = cli.Get("/api/games/" + id);
    REQUIRE(r);
    CHECK(body(r)["moves"].size() == 2);
  }
  CHECK(successes == 20);
}
