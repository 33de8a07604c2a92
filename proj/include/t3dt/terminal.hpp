#pragma once

#include <cstdint>
#include <iosfwd>

#include "t3dt/game.hpp"
#include "t3dt/policy.hpp"

namespace t3dt {

struct PlayOptions {
  Starter first = Starter::Opponent;
  std::uint64_t seed = 0;
  PolicyMode mode = PolicyMode::Safe;
};

/// Human (O) against the bot (X) over a text stream. The human enters
/// "row col" (1-based). Returns 0 when the game ends, 1 if input runs out.
int run_terminal_play(std::istream& in, std::ostream& out, const PlayOptions& opts);

}  // namespace t3dt
