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

#include "sspi/coin_game.h"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "sspi/parallel.h"

namespace sspi {

char BinName(Bin b) { return b == Bin::kRed ? 'R' : 'B'; }

std::optional<Player> GameState::winner() const {
  if (red_saturated == Coin::kHeads || blue_saturated == Coin::kHeads) {
    return Player::kP1;
  }
  if (red_saturated == Coin::kTails && blue_saturated == Coin::kTails) {
    return Player::kP2;
  }
  return std::nullopt;
}

GameState NewGame(int r_red, int r_blue) {
  if (r_red < 1 || r_red >= r_blue) {
    throw std::invalid_argument("game needs 1 <= r_R < r_B, got r_R=" +
                                std::to_string(r_red) +
                                " r_B=" + std::to_string(r_blue));
  }
  GameState s;
  s.r_red = r_red;
  s.r_blue = r_blue;
  return s;
}

namespace {

void Count(GameState& s, Bin bin, Coin outcome) {
  const bool red = bin == Bin::kRed;
  int& heads = red ? s.red_heads : s.blue_heads;
  int& tails = red ? s.red_tails : s.blue_tails;
  std::optional<Coin>& saturated = red ? s.red_saturated : s.blue_saturated;
  const int cap = red ? s.r_red : s.r_blue;
  int& c = outcome == Coin::kHeads ? heads : tails;
  ++c;
  if (!saturated && c == cap) {
    saturated = outcome;
    s.saturations.push_back({bin, outcome, s.time()});
  }
}

}  // namespace

void ApplyToss(GameState& s, Bin requested, Coin outcome) {
  if (s.winner()) throw std::logic_error("coin game already decided");
  Bin bin = requested;
  if (bin == Bin::kRed && s.red_saturated) bin = Bin::kBlue;
  if (bin == Bin::kBlue && s.blue_saturated) bin = Bin::kRed;
  s.tosses.push_back({s.time() + 1, bin, outcome});
  if (bin == Bin::kRed) {
    s.red_tosses.push_back(
        {static_cast<int>(s.red_tosses.size()) + 1, outcome, s.time()});
    Count(s, Bin::kRed, outcome);
  }
  Count(s, Bin::kBlue, outcome);
}

Bin BlueFirst(const GameState& state) {
  return state.blue_saturated ? Bin::kRed : Bin::kBlue;
}

GameResult PlayCoinGame(int r_red, int r_blue, const GameStrategy& p1,
                        const CoinStream& coins) {
  GameResult result{Player::kP1, NewGame(r_red, r_blue)};
  GameState& s = result.state;
  while (!s.winner()) {
    Bin choice = p1(s);  // decided before the coin is drawn
    ApplyToss(s, choice, coins());
  }
  result.winner = *s.winner();
  return result;
}

namespace {

void CheckGameCaps(int r_red, int r_blue) {
  if (r_red > kGameRedCap) throw CapExceeded("r_R", kGameRedCap, r_red);
  if (r_blue > kGameBlueCap) throw CapExceeded("r_B", kGameBlueCap, r_blue);
}

using GameKey = std::array<int, 6>;

GameKey KeyOf(const GameState& s) {
  auto sat = [](const std::optional<Coin>& c) {
    return c ? 1 + static_cast<int>(*c) : 0;
  };
  return {s.red_heads, s.red_tails, s.blue_heads, s.blue_tails,
          sat(s.red_saturated), sat(s.blue_saturated)};
}

const Rational kHalf(1, 2);

Rational Terminal(const GameState& s) {
  return *s.winner() == Player::kP2 ? Rational(1) : Rational(0);
}

Rational Minimax(const GameState& s, std::map<GameKey, Rational>& memo) {
  if (s.winner()) return Terminal(s);
  GameKey key = KeyOf(s);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::optional<Rational> best;
  for (Bin b : {Bin::kRed, Bin::kBlue}) {
    Rational v;
    for (Coin c : {Coin::kHeads, Coin::kTails}) {
      GameState next = s;
      ApplyToss(next, b, c);
      v = v + kHalf * Minimax(next, memo);
    }
    if (!best || v < *best) best = v;
  }
  memo.emplace(key, *best);
  return *best;
}

Rational FollowStrategy(const GameState& s, const GameStrategy& p1) {
  if (s.winner()) return Terminal(s);
  Bin choice = p1(s);
  Rational v;
  for (Coin c : {Coin::kHeads, Coin::kTails}) {
    GameState next = s;
    ApplyToss(next, choice, c);
    v = v + kHalf * FollowStrategy(next, p1);
  }
  return v;
}

}  // namespace

Rational ExhaustiveGameValue(int r_red, int r_blue) {
  GameState start = NewGame(r_red, r_blue);
  CheckGameCaps(r_red, r_blue);
  std::map<GameKey, Rational> memo;
  return Minimax(start, memo);
}

Rational StrategyValue(int r_red, int r_blue, const GameStrategy& p1) {
  GameState start = NewGame(r_red, r_blue);
  CheckGameCaps(r_red, r_blue);
  return FollowStrategy(start, p1);
}

GameEstimate SimulateGame(int r_red, int r_blue, const GameStrategy& p1,
                          int64_t trials, uint64_t seed) {
  NewGame(r_red, r_blue);
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  constexpr int64_t kBlock = 16384;
  const int64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<int64_t> wins(blocks, 0);
  ParallelFor(blocks, [&](int64_t b) {
    Rng rng = StreamFor(seed, static_cast<uint64_t>(b));
    std::uniform_int_distribution<int> bit(0, 1);
    CoinStream coins = [&] { return bit(rng) ? Coin::kTails : Coin::kHeads; };
    const int64_t end = std::min(trials, (b + 1) * kBlock);
    for (int64_t t = b * kBlock; t < end; ++t) {
      wins[b] += PlayCoinGame(r_red, r_blue, p1, coins).winner == Player::kP2;
    }
  });
  GameEstimate est;
  est.trials = trials;
  for (int64_t w : wins) est.p2_wins += w;
  est.frequency = static_cast<double>(est.p2_wins) / trials;
  est.std_error = std::sqrt(est.frequency * (1 - est.frequency) / trials);
  return est;
}

}  // namespace sspi
