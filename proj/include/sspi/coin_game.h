// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSPI_COIN_GAME_H_
#define SSPI_COIN_GAME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sspi/core.h"

namespace sspi {

// R is the red (inner) bin, B the blue (outer) one. Every toss into R also
// counts toward B.
enum class Bin : uint8_t { kRed, kBlue };
enum class Player : uint8_t { kP1, kP2 };

char BinName(Bin b);

struct Toss {
  int t = 0;  // 1-based time
  Bin bin = Bin::kBlue;
  Coin outcome = Coin::kHeads;
};

// The i-th toss into R happened at time tau with outcome q.
struct RedToss {
  int i = 0;
  Coin q = Coin::kHeads;
  int tau = 0;
};

struct Saturation {
  Bin bin = Bin::kBlue;
  Coin side = Coin::kHeads;
  int t = 0;
};

struct GameState {
  int r_red = 1;
  int r_blue = 2;
  int red_heads = 0, red_tails = 0;
  int blue_heads = 0, blue_tails = 0;
  std::optional<Coin> red_saturated;
  std::optional<Coin> blue_saturated;
  std::vector<Toss> tosses;
  std::vector<RedToss> red_tosses;
  std::vector<Saturation> saturations;

  int time() const { return static_cast<int>(tosses.size()); }
  // The winner is known once a bin saturates with heads or both saturate
  // with tails; play stops there.
  std::optional<Player> winner() const;
};

// Throws std::invalid_argument unless 1 <= r_red < r_blue.
GameState NewGame(int r_red, int r_blue);

// Applies one toss. A request for a saturated bin is redirected to the other
// one. Throws std::logic_error when the game is already decided.
void ApplyToss(GameState& state, Bin requested, Coin outcome);

// Sees the history up to the previous toss only. Strategies used by the
// Monte Carlo driver are called from several threads and must not keep
// shared mutable state.
using GameStrategy = std::function<Bin(const GameState&)>;
using CoinStream = std::function<Coin()>;

// Toss into B until it saturates, then into R.
Bin BlueFirst(const GameState& state);

struct GameResult {
  Player winner = Player::kP1;
  GameState state;
};

GameResult PlayCoinGame(int r_red, int r_blue, const GameStrategy& p1,
                        const CoinStream& coins);

inline constexpr int kGameRedCap = 2;
inline constexpr int kGameBlueCap = 4;

// Probability that P2 wins when P1 plays to minimize it, by backward
// induction. Throws CapExceeded beyond kGameRedCap / kGameBlueCap.
Rational ExhaustiveGameValue(int r_red, int r_blue);

// Exact P2-win probability of a deterministic strategy, by enumerating coin
// outcomes. Same caps.
Rational StrategyValue(int r_red, int r_blue, const GameStrategy& p1);

struct GameEstimate {
  int64_t trials = 0;
  int64_t p2_wins = 0;
  double frequency = 0.0;
  double std_error = 0.0;
};

// Trials run in fixed blocks, each on its own stream, so the estimate is
// independent of the worker count.
GameEstimate SimulateGame(int r_red, int r_blue, const GameStrategy& p1,
                          int64_t trials, uint64_t seed);

}  // namespace sspi

#endif  // SSPI_COIN_GAME_H_
