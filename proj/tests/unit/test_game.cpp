#include <doctest.h>

#include "t3dt/game.hpp"
#include "t3dt/minimax.hpp"

using namespace t3dt;

namespace {

// Always proposes cell 0, legal or not.
class StubbornPolicy final : public Policy {
 public:
  std::string name() const override { return "stubborn"; }
  Decision decide(const GameContext&) const override { return Decision::uniform(CellSet{0}, RuleId::RandomFill); }
};

}  // namespace

TEST_CASE("transcript text format and round trip") {
  GameRecord rec;
  rec.plies = {{1, Mark::X, Cell(4), RuleId::FirstRandom}, {2, Mark::O, Cell(0), std::nullopt}};
  rec.outcome = Outcome::Ongoing;
  CHECK(rec.transcript() == "1 X 4 FIRST_RANDOM\n2 O 0 -\nRESULT Ongoing\n");
  CHECK(GameRecord::parse(rec.transcript()) == rec);
  CHECK(rec.replay().text() == "O...X....");

  CHECK_THROWS_AS(GameRecord::parse("1 X 4 FIRST_RANDOM\n"), GameError);
  CHECK_THROWS_AS(GameRecord::parse("1 X 4 NOPE\nRESULT Draw\n"), GameError);
  CHECK_THROWS_AS(GameRecord::parse("1 X 9 -\nRESULT Draw\n"), GameError);
  CHECK_THROWS_AS(GameRecord::parse("RESULT Draw\n1 X 4 -\n"), GameError);
  GameRecord bad;
  bad.plies = {{1, Mark::X, Cell(4), std::nullopt}, {2, Mark::X, Cell(0), std::nullopt}};
  CHECK_THROWS_AS(bad.replay(), GameError);
}

TEST_CASE("games between policies replay to their recorded outcome") {
  const T3dtPolicy bot(PolicyMode::Safe);
  const RandomPolicy rnd;
  RandomSource rng(2024);
  for (int i = 0; i < 500; ++i) {
    const Starter first = i % 2 ? Starter::Bot : Starter::Opponent;
    const GameRecord rec = play_game(bot, rnd, first, rng);
    const Board end = rec.replay();
    CHECK(outcome(end) == rec.outcome);
    CHECK(rec.outcome != Outcome::OWin);
    CHECK(rec.plies.front().mark == (first == Starter::Bot ? Mark::X : Mark::O));
    for (const PlyRecord& p : rec.plies) {
      REQUIRE(p.rule.has_value());
      if (p.mark == Mark::O) CHECK(*p.rule == RuleId::RandomFill);
    }
    CHECK(GameRecord::parse(rec.transcript()) == rec);
  }
}

TEST_CASE("seeded games are reproducible") {
  const T3dtPolicy bot;
  const RandomPolicy rnd;
  RandomSource a(5), b(5);
  for (int i = 0; i < 50; ++i) CHECK(play_game(bot, rnd, Starter::Bot, a) == play_game(bot, rnd, Starter::Bot, b));
}

TEST_CASE("bot may play O") {
  const MinimaxPolicy mm(SearchAlgorithm::AlphaBeta);
  const RandomPolicy rnd;
  RandomSource rng(1);
  for (int i = 0; i < 50; ++i) {
    const GameRecord rec = play_game(mm, rnd, Starter::Opponent, rng, Mark::O);
    CHECK(rec.plies.front().mark == Mark::X);
    CHECK(rec.outcome != Outcome::XWin);
  }
}

TEST_CASE("illegal proposals abort with the game so far") {
  const StubbornPolicy stubborn;
  const RandomPolicy rnd;
  RandomSource rng(3);
  try {
    play_game(stubborn, rnd, Starter::Bot, rng);
    FAIL("expected IllegalMoveError");
  } catch (const IllegalMoveError& e) {
    CHECK(e.record().plies.size() == 2);
    CHECK(e.record().plies.front().cell == Cell(0));
  }
}
