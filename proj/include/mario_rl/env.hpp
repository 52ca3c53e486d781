#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mario_rl {

inline constexpr int kLevelRows = 16;
inline constexpr int kViewportRows = 16;
inline constexpr int kViewportCols = 22;
inline constexpr int kGroundRow = kLevelRows - 1;
inline constexpr int kSpawnColumn = 2;
inline constexpr int kMinLevelWidth = 30;

enum class TileKind : std::uint8_t {
  Empty,
  Ground,
  Brick,
  QuestionBlock,
  UsedBlock,
  Coin,
  PipeBody,
  PipeTop,
  Platform,
  FinishPole,
};
inline constexpr int kTileKindCount = 10;

bool is_solid(TileKind t);
char tile_char(TileKind t);
// Throws std::invalid_argument for characters outside the level alphabet.
TileKind tile_from_char(char c);

enum class Facing : std::uint8_t { Left, Right };
enum class EntityKind : std::uint8_t { Walker, Fireball };

std::string_view to_string(Facing f);
std::string_view to_string(EntityKind k);

struct MonsterSpawn {
  EntityKind kind = EntityKind::Walker;
  int column = 0;
  int row = 0;
  Facing facing = Facing::Left;

  bool operator==(const MonsterSpawn&) const = default;
};

struct Level {
  int width = 0;
  std::vector<TileKind> tiles;  // row-major, kLevelRows x width
  std::vector<MonsterSpawn> monster_spawns;
  int finish_column = 0;
  std::uint64_t seed = 0;
  int level_type = 0;
  int difficulty = 0;

  TileKind at(int row, int col) const { return tiles[static_cast<std::size_t>(row) * width + col]; }
  TileKind& at(int row, int col) { return tiles[static_cast<std::size_t>(row) * width + col]; }
  bool in_bounds(int row, int col) const { return row >= 0 && row < kLevelRows && col >= 0 && col < width; }

  bool operator==(const Level&) const = default;
};

// Returns an empty string when every Level invariant holds, otherwise a
// description of the first violation found.
std::string validate_level(const Level& level);

struct GeneratorOptions {
  int width = 150;
  // Places a coin run within reach of every monster spawn.
  bool coin_monster_conjunctions = false;
};

// Only level_type 0 (overground) exists; anything else throws
// std::invalid_argument.
Level generate_level(int level_type, int difficulty, std::uint64_t seed,
                     const GeneratorOptions& options = {});

std::string dump_level(const Level& level);
// Parses the text produced by dump_level. Throws std::runtime_error on
// malformed input.
Level load_level(std::string_view text);

struct EntityState {
  int id = 0;
  EntityKind kind = EntityKind::Walker;
  double x = 0, y = 0;
  double vx = 0, vy = 0;
  bool alive = true;
  Facing facing = Facing::Left;

  bool operator==(const EntityState&) const = default;
};

struct MarioState {
  double x = 0, y = 0;
  double vx = 0, vy = 0;
  bool on_ground = false;
  int fire_cooldown = 0;
  bool alive = true;
  int max_column_reached = kSpawnColumn;
  Facing facing = Facing::Right;

  bool operator==(const MarioState&) const = default;
};

struct Observation {
  std::vector<TileKind> viewport;  // kViewportRows x kViewportCols, row-major
  int viewport_origin_column = 0;
  std::vector<EntityState> entities;
  MarioState mario;
  int tick = 0;

  TileKind tile(int row, int viewport_col) const {
    return viewport[static_cast<std::size_t>(row) * kViewportCols + viewport_col];
  }

  bool operator==(const Observation&) const = default;
};

enum class Direction : std::uint8_t { Left, None, Right };

struct Action {
  Direction direction = Direction::None;
  bool jump = false;
  bool fire = false;

  bool operator==(const Action&) const = default;
};

struct RewardConfig {
  double per_tick = -0.05;
  double per_new_column = 1.0;
  double coin = 10.0;
  double monster_kill = 20.0;
  double question_block = 5.0;
  double finish = 100.0;
  double death = -100.0;
  int episode_tick_limit = 2000;
};

struct PhysicsConfig {
  double max_speed = 0.25;
  double acceleration = 0.05;
  double jump_impulse = 0.9;
  double gravity = 0.1;
  double max_fall_speed = 0.9;
  double mario_width = 0.8;
  double walker_width = 0.8;
  double walker_speed = 0.1;
  double fireball_speed = 0.5;
  double fireball_size = 0.5;
  int fireball_lifetime = 40;
  int fire_cooldown = 10;
  double stomp_bounce = 0.5;
  int corpse_ticks = 10;
  // Walkers start moving once Mario is this many columns away or closer.
  double walker_activation_range = 14.0;
};

enum class Outcome : std::uint8_t { Running, Finished, Died, TimedOut };
std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct StepResult {
  Observation observation;
  double reward = 0;
  bool done = false;
  Outcome outcome = Outcome::Running;
};

struct EpisodeStats {
  int ticks = 0;
  int coins = 0;
  int kills = 0;
  int blocks = 0;
  double total_reward = 0;
  double terminal_reward = 0;
  Outcome outcome = Outcome::Running;
};

// Mario's integer column and row: the cell containing the centre of his box.
int mario_column(const MarioState& m, const PhysicsConfig& physics = {});
int mario_row(const MarioState& m);
int entity_column(const EntityState& e);
int entity_row(const EntityState& e);

// Single-threaded simulation of one level. Distinct instances share nothing.
class Env {
 public:
  explicit Env(RewardConfig rewards = {}, PhysicsConfig physics = {});

  Observation reset(const Level& level);
  // Throws std::logic_error when called after the episode has ended.
  StepResult step(const Action& action);

  bool done() const { return outcome_ != Outcome::Running; }
  Outcome outcome() const { return outcome_; }
  const EpisodeStats& stats() const { return stats_; }
  const MarioState& mario() const { return mario_; }
  const Level& level() const { return level_; }
  // Every entity still simulated, including walker corpses.
  std::vector<EntityState> entities() const;
  const RewardConfig& rewards() const { return rewards_; }
  const PhysicsConfig& physics() const { return physics_; }
  int tick() const { return tick_; }

  Observation observe() const;

 private:
  bool solid(int row, int col) const;
  bool box_hits_solid(double x, double y, double w, double h) const;
  struct Body {
    EntityState state;
    int timer = 0;  // corpse countdown for walkers, age for fireballs
    bool active = false;
  };

  double move_mario(const Action& action);
  double collect_coins();
  void spawn_fireball();
  void move_walkers();
  double move_fireballs();
  double resolve_mario_walker_contacts(double previous_y);

  RewardConfig rewards_;
  PhysicsConfig physics_;
  Level level_;
  MarioState mario_;
  std::vector<Body> bodies_;
  int next_entity_id_ = 0;
  int tick_ = 0;
  Outcome outcome_ = Outcome::Running;
  EpisodeStats stats_;
};

// 16 lines of 22 characters, each followed by '\n'. Empty renders as a blank.
std::string render_ascii(const Observation& observation);

// FNV-1a over every field of the observation; used to compare trajectories.
std::uint64_t hash_observation(const Observation& o, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace mario_rl
