#include <algorithm>
#include <stdexcept>
#include <string>

#include "mario_rl/env.hpp"
#include "mario_rl/rng.hpp"

namespace mario_rl {

namespace {

constexpr int kSafeStartColumns = 10;
constexpr int kFinishMargin = 4;
constexpr int kSafeFinishColumns = 8;
constexpr int kQuestionRow = 10;
constexpr int kPlatformRow = 12;

enum class Feature { Pit, Pipe, Coins, Blocks, Platform };

struct Weights {
  int pit, pipe, coins, blocks, platform;
  int total() const { return pit + pipe + coins + blocks + platform; }
};

Weights feature_weights(int d) {
  return {4 + 2 * d, 3 + d, 4, 3, 2};
}

Feature pick_feature(Rng& rng, const Weights& w) {
  int r = uniform_int(rng, 0, w.total() - 1);
  if ((r -= w.pit) < 0) return Feature::Pit;
  if ((r -= w.pipe) < 0) return Feature::Pipe;
  if ((r -= w.coins) < 0) return Feature::Coins;
  if ((r -= w.blocks) < 0) return Feature::Blocks;
  return Feature::Platform;
}

class Builder {
 public:
  Builder(Level& level, Rng& rng) : level_(level), rng_(rng) {}

  // Returns the first free column after the feature.
  int pit(int col, int width) {
    for (int c = col; c < col + width; ++c) level_.at(kGroundRow, c) = TileKind::Empty;
    return col + width;
  }

  int pipe(int col, int height) {
    for (int c = col; c < col + 2; ++c) {
      for (int r = kGroundRow - height; r < kGroundRow; ++r)
        level_.at(r, c) = r == kGroundRow - height ? TileKind::PipeTop : TileKind::PipeBody;
    }
    return col + 2;
  }

  int coin_run(int col, int length, int row) {
    for (int c = col; c < col + length; ++c) level_.at(row, c) = TileKind::Coin;
    return col + length;
  }

  int blocks(int col, int length) {
    bool any_question = false;
    for (int c = col; c < col + length; ++c) {
      const bool question = bernoulli(rng_, 0.6) || (!any_question && c == col + length - 1);
      any_question |= question;
      level_.at(kQuestionRow, c) = question ? TileKind::QuestionBlock : TileKind::Brick;
    }
    return col + length;
  }

  int platform(int col, int length) {
    for (int c = col; c < col + length; ++c) {
      level_.at(kPlatformRow, c) = TileKind::Platform;
      if (bernoulli(rng_, 0.5)) level_.at(kPlatformRow - 1, c) = TileKind::Coin;
    }
    return col + length;
  }

 private:
  Level& level_;
  Rng& rng_;
};

}  // namespace

Level generate_level(int level_type, int difficulty, std::uint64_t seed,
                     const GeneratorOptions& options) {
  if (level_type != 0)
    throw std::invalid_argument("unsupported level_type " + std::to_string(level_type) +
                                ": only the overground type 0 is available");
  if (difficulty < 0) throw std::invalid_argument("difficulty must be non-negative");
  if (options.width < kMinLevelWidth)
    throw std::invalid_argument("level width must be at least " + std::to_string(kMinLevelWidth));

  Rng rng(splitmix64(seed) ^ splitmix64(0x4d4152494fULL + static_cast<std::uint64_t>(difficulty)));

  Level level;
  level.width = options.width;
  level.seed = seed;
  level.level_type = level_type;
  level.difficulty = difficulty;
  level.tiles.assign(static_cast<std::size_t>(kLevelRows) * level.width, TileKind::Empty);
  for (int c = 0; c < level.width; ++c) level.at(kGroundRow, c) = TileKind::Ground;

  level.finish_column = level.width - kFinishMargin;
  for (int r = 5; r < kGroundRow; ++r) level.at(r, level.finish_column) = TileKind::FinishPole;

  const int d = std::min(difficulty, 8);
  const int max_pit = d == 0 ? 2 : std::min(2 + d / 2, 4);
  const int max_pipe = d == 0 ? 3 : std::min(3 + d / 3, 4);
  const int min_gap = std::max(2, 4 - d / 2);
  const int max_gap = std::max(min_gap + 1, 8 - std::min(d, 4));
  const double monster_chance =
      options.coin_monster_conjunctions ? 1.0 : std::min(0.9, 0.3 + 0.1 * d);
  // At difficulty 0 the count is capped at width / 20.
  const int monster_cap = d == 0 ? level.width / 20 : level.width / 8;
  const int end = level.finish_column - kSafeFinishColumns;

  Builder build(level, rng);
  const Weights weights = feature_weights(d);

  auto try_monster = [&](int from, int to) {
    // Flat, empty ground strictly inside [from, to).
    if (static_cast<int>(level.monster_spawns.size()) >= monster_cap || to - from < 1) return -1;
    const int col = uniform_int(rng, from, to - 1);
    if (col < kSafeStartColumns + 2) return -1;
    if (level.at(kGroundRow, col) != TileKind::Ground || level.at(kGroundRow - 1, col) != TileKind::Empty)
      return -1;
    level.monster_spawns.push_back({EntityKind::Walker, col, kGroundRow - 1, Facing::Left});
    return col;
  };

  int col = kSafeStartColumns + uniform_int(rng, 0, 2);
  while (col < end) {
    const Feature f = pick_feature(rng, weights);
    const int start = col;
    int next = col;
    switch (f) {
      case Feature::Pit: {
        const int w = uniform_int(rng, 1, max_pit);
        if (col + w >= end) break;
        next = build.pit(col, w);
        break;
      }
      case Feature::Pipe: {
        if (col + 2 >= end) break;
        next = build.pipe(col, uniform_int(rng, 2, max_pipe));
        break;
      }
      case Feature::Coins: {
        const int len = std::min(uniform_int(rng, 1, 4), end - col);
        next = build.coin_run(col, len, uniform_int(rng, 11, 13));
        break;
      }
      case Feature::Blocks: {
        const int len = std::min(uniform_int(rng, 1, 3), end - col);
        next = build.blocks(col, len);
        break;
      }
      case Feature::Platform: {
        const int len = std::min(uniform_int(rng, 3, 5), end - col);
        next = build.platform(col, len);
        break;
      }
    }
    if (next == start) break;

    const int gap = uniform_int(rng, min_gap, max_gap);
    const int gap_end = std::min(next + 1 + gap, end);
    // Monsters only stand in the flat gap after a feature, never at its flanks.
    if (bernoulli(rng, monster_chance)) {
      const int m = try_monster(next + 1, gap_end);
      if (m >= 0 && options.coin_monster_conjunctions) {
        const int row = uniform_int(rng, 12, 13);
        for (int c = std::max(m - 2, next); c <= std::min(m, end - 1); ++c)
          if (level.at(row, c) == TileKind::Empty) level.at(row, c) = TileKind::Coin;
      }
    }
    col = next + 1 + gap;
  }

  return level;
}

}  // namespace mario_rl
