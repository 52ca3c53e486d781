#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mario_rl/env.hpp"

namespace mario_rl {

namespace {

// Boxes are half-open; the epsilon keeps a box resting exactly on a cell
// boundary from claiming the neighbouring cell.
constexpr double kEps = 1e-9;
constexpr double kMarioHeight = 1.0;
constexpr double kSupportProbe = 1e-6;
constexpr double kWalkerHeight = 1.0;

int first_cell(double lo) { return static_cast<int>(std::floor(lo + kEps)); }
int last_cell(double lo, double size) { return static_cast<int>(std::floor(lo + size - kEps)); }

bool boxes_overlap(double ax, double ay, double aw, double ah, double bx, double by, double bw, double bh) {
  return ax < bx + bw - kEps && bx < ax + aw - kEps && ay < by + bh - kEps && by < ay + ah - kEps;
}

double direction_sign(Direction d) {
  switch (d) {
    case Direction::Left: return -1.0;
    case Direction::Right: return 1.0;
    default: return 0.0;
  }
}

}  // namespace

int mario_column(const MarioState& m, const PhysicsConfig& physics) {
  return static_cast<int>(std::floor(m.x + physics.mario_width / 2));
}
int mario_row(const MarioState& m) { return static_cast<int>(std::floor(m.y + kMarioHeight / 2)); }

int entity_column(const EntityState& e) {
  const PhysicsConfig defaults;
  const double w = e.kind == EntityKind::Walker ? defaults.walker_width : defaults.fireball_size;
  return static_cast<int>(std::floor(e.x + w / 2));
}
int entity_row(const EntityState& e) {
  const PhysicsConfig defaults;
  const double h = e.kind == EntityKind::Walker ? kWalkerHeight : defaults.fireball_size;
  return static_cast<int>(std::floor(e.y + h / 2));
}

Env::Env(RewardConfig rewards, PhysicsConfig physics) : rewards_(rewards), physics_(physics) {
  if (rewards_.episode_tick_limit <= 0) throw std::invalid_argument("episode_tick_limit must be positive");
}

bool Env::solid(int row, int col) const {
  if (col < 0 || col >= level_.width) return true;
  if (row < 0 || row >= kLevelRows) return false;
  return is_solid(level_.at(row, col));
}

bool Env::box_hits_solid(double x, double y, double w, double h) const {
  for (int r = first_cell(y); r <= last_cell(y, h); ++r)
    for (int c = first_cell(x); c <= last_cell(x, w); ++c)
      if (solid(r, c)) return true;
  return false;
}

Observation Env::reset(const Level& level) {
  if (const auto err = validate_level(level); !err.empty())
    throw std::invalid_argument("invalid level: " + err);
  level_ = level;

  mario_ = MarioState{};
  mario_.x = kSpawnColumn;
  mario_.y = kGroundRow - 1;
  int top = kLevelRows;
  while (top > 0 && solid(top - 1, kSpawnColumn)) --top;
  if (top < kLevelRows) mario_.y = top - kMarioHeight;
  mario_.on_ground = true;
  mario_.max_column_reached = mario_column(mario_, physics_);

  bodies_.clear();
  next_entity_id_ = 0;
  for (const auto& spawn : level_.monster_spawns) {
    Body b;
    b.state.id = next_entity_id_++;
    b.state.kind = EntityKind::Walker;
    b.state.x = spawn.column + (1.0 - physics_.walker_width) / 2;
    b.state.y = spawn.row;
    b.state.facing = spawn.facing;
    bodies_.push_back(b);
  }

  tick_ = 0;
  outcome_ = Outcome::Running;
  stats_ = EpisodeStats{};
  return observe();
}

double Env::move_mario(const Action& action) {
  auto& m = mario_;
  const auto& p = physics_;
  double reward = 0;

  // With no direction held Mario keeps his momentum in the air.
  if (action.direction != Direction::None || m.on_ground) {
    const double target = direction_sign(action.direction) * p.max_speed;
    m.vx += std::clamp(target - m.vx, -p.acceleration, p.acceleration);
  }
  if (action.direction == Direction::Left) m.facing = Facing::Left;
  if (action.direction == Direction::Right) m.facing = Facing::Right;

  if (action.jump && m.on_ground) {
    m.vy = -p.jump_impulse;
    m.on_ground = false;
  }

  // Horizontal axis first.
  double nx = m.x + m.vx;
  if (m.vx != 0 && box_hits_solid(nx, m.y, p.mario_width, kMarioHeight)) {
    if (m.vx > 0) nx = last_cell(nx, p.mario_width) - p.mario_width;
    else nx = first_cell(nx) + 1;
    m.vx = 0;
  }
  m.x = nx;

  // Vertical axis: exact parabola per tick.
  const double dy = m.vy + p.gravity / 2;
  m.vy = std::min(m.vy + p.gravity, p.max_fall_speed);
  double ny = m.y + dy;
  m.on_ground = false;
  if (box_hits_solid(m.x, ny, p.mario_width, kMarioHeight)) {
    if (dy > 0) {
      ny = last_cell(ny, kMarioHeight) - kMarioHeight;
      m.on_ground = true;
    } else {
      const int head_row = first_cell(ny);
      ny = head_row + 1;
      for (int c = first_cell(m.x); c <= last_cell(m.x, p.mario_width); ++c) {
        if (level_.in_bounds(head_row, c) && level_.at(head_row, c) == TileKind::QuestionBlock) {
          level_.at(head_row, c) = TileKind::UsedBlock;
          ++stats_.blocks;
          reward += rewards_.question_block;
        }
      }
    }
    m.vy = 0;
  } else if (dy >= 0 && box_hits_solid(m.x, ny + kSupportProbe, p.mario_width, kMarioHeight)) {
    m.on_ground = true;
    m.vy = 0;
  }
  m.y = ny;
  return reward;
}

double Env::collect_coins() {
  double reward = 0;
  for (int r = first_cell(mario_.y); r <= last_cell(mario_.y, kMarioHeight); ++r) {
    for (int c = first_cell(mario_.x); c <= last_cell(mario_.x, physics_.mario_width); ++c) {
      if (level_.in_bounds(r, c) && level_.at(r, c) == TileKind::Coin) {
        level_.at(r, c) = TileKind::Empty;
        ++stats_.coins;
        reward += rewards_.coin;
      }
    }
  }
  return reward;
}

void Env::spawn_fireball() {
  const auto& p = physics_;
  Body b;
  b.state.id = next_entity_id_++;
  b.state.kind = EntityKind::Fireball;
  b.state.facing = mario_.facing;
  b.state.x = mario_.facing == Facing::Right ? mario_.x + p.mario_width : mario_.x - p.fireball_size;
  b.state.y = mario_.y + (kMarioHeight - p.fireball_size) / 2;
  b.state.vx = mario_.facing == Facing::Right ? p.fireball_speed : -p.fireball_speed;
  b.active = true;
  bodies_.push_back(b);
}

void Env::move_walkers() {
  const auto& p = physics_;
  for (auto& b : bodies_) {
    auto& w = b.state;
    if (w.kind != EntityKind::Walker || !w.alive) continue;
    if (!b.active && std::abs(w.x - mario_.x) <= p.walker_activation_range) b.active = true;
    if (!b.active) continue;

    const double sign = w.facing == Facing::Right ? 1.0 : -1.0;
    const double nx = w.x + sign * p.walker_speed;
    const int lead = w.facing == Facing::Right ? last_cell(nx, p.walker_width) : first_cell(nx);
    const int below = last_cell(w.y, kWalkerHeight) + 1;
    const bool blocked = nx < 0 || nx + p.walker_width > level_.width ||
                         box_hits_solid(nx, w.y, p.walker_width, kWalkerHeight);
    const bool edge = !solid(below, lead);
    if (blocked || edge) {
      w.facing = w.facing == Facing::Right ? Facing::Left : Facing::Right;
      w.vx = -sign * p.walker_speed;
    } else {
      w.x = nx;
      w.vx = sign * p.walker_speed;
    }
  }
}

double Env::move_fireballs() {
  const auto& p = physics_;
  double reward = 0;
  for (auto& b : bodies_) {
    auto& f = b.state;
    if (f.kind != EntityKind::Fireball || !f.alive) continue;
    const double nx = f.x + f.vx;
    if (b.timer >= p.fireball_lifetime || nx < 0 || nx + p.fireball_size > level_.width ||
        box_hits_solid(nx, f.y, p.fireball_size, p.fireball_size)) {
      f.alive = false;
      continue;
    }
    f.x = nx;
    ++b.timer;
    for (auto& other : bodies_) {
      auto& w = other.state;
      if (w.kind != EntityKind::Walker || !w.alive) continue;
      if (!boxes_overlap(f.x, f.y, p.fireball_size, p.fireball_size, w.x, w.y, p.walker_width, kWalkerHeight))
        continue;
      w.alive = false;
      w.vx = 0;
      other.timer = p.corpse_ticks;
      f.alive = false;
      ++stats_.kills;
      reward += rewards_.monster_kill;
      break;
    }
  }
  return reward;
}

double Env::resolve_mario_walker_contacts(double previous_y) {
  const auto& p = physics_;
  double reward = 0;
  bool hurt = false;
  for (auto& b : bodies_) {
    auto& w = b.state;
    if (w.kind != EntityKind::Walker || !w.alive) continue;
    if (!boxes_overlap(mario_.x, mario_.y, p.mario_width, kMarioHeight, w.x, w.y, p.walker_width, kWalkerHeight))
      continue;
    const bool from_above = previous_y + kMarioHeight <= w.y + kWalkerHeight / 2 && mario_.y >= previous_y;
    if (from_above) {
      w.alive = false;
      w.vx = 0;
      b.timer = p.corpse_ticks;
      ++stats_.kills;
      reward += rewards_.monster_kill;
      mario_.vy = -p.stomp_bounce;
      mario_.on_ground = false;
    } else {
      hurt = true;
    }
  }
  if (hurt) mario_.alive = false;
  return reward;
}

StepResult Env::step(const Action& action) {
  if (done()) throw std::logic_error("step called after the episode ended");

  const double previous_y = mario_.y;
  double reward = rewards_.per_tick;

  reward += move_mario(action);
  reward += collect_coins();

  const bool fire = action.fire && mario_.fire_cooldown == 0;
  if (fire) {
    spawn_fireball();
    mario_.fire_cooldown = physics_.fire_cooldown;
  } else if (mario_.fire_cooldown > 0) {
    --mario_.fire_cooldown;
  }

  move_walkers();
  reward += move_fireballs();
  reward += resolve_mario_walker_contacts(previous_y);

  // Corpses linger, spent fireballs vanish.
  for (auto& b : bodies_)
    if (b.state.kind == EntityKind::Walker && !b.state.alive && b.timer > 0) --b.timer;
  std::erase_if(bodies_, [](const Body& b) {
    return !b.state.alive && (b.state.kind == EntityKind::Fireball || b.timer == 0);
  });

  if (mario_.y > kGroundRow) mario_.alive = false;

  const int column = mario_column(mario_, physics_);
  if (column > mario_.max_column_reached) {
    reward += rewards_.per_new_column * (column - mario_.max_column_reached);
    mario_.max_column_reached = column;
  }

  ++tick_;
  double terminal = 0;
  if (!mario_.alive) {
    outcome_ = Outcome::Died;
    terminal = rewards_.death;
  } else if (column >= level_.finish_column) {
    outcome_ = Outcome::Finished;
    terminal = rewards_.finish;
  } else if (tick_ >= rewards_.episode_tick_limit) {
    outcome_ = Outcome::TimedOut;
  }
  reward += terminal;

  stats_.ticks = tick_;
  stats_.total_reward += reward;
  stats_.terminal_reward = terminal;
  stats_.outcome = outcome_;

  return StepResult{observe(), reward, done(), outcome_};
}

std::vector<EntityState> Env::entities() const {
  std::vector<EntityState> out;
  out.reserve(bodies_.size());
  for (const auto& b : bodies_) out.push_back(b.state);
  return out;
}

Observation Env::observe() const {
  Observation o;
  o.tick = tick_;
  o.mario = mario_;
  const int column = mario_column(mario_, physics_);
  o.viewport_origin_column = std::clamp(column - kViewportCols / 2, 0, std::max(0, level_.width - kViewportCols));
  o.viewport.assign(static_cast<std::size_t>(kViewportRows) * kViewportCols, TileKind::Empty);
  for (int r = 0; r < kViewportRows; ++r) {
    for (int c = 0; c < kViewportCols; ++c) {
      const int col = o.viewport_origin_column + c;
      if (level_.in_bounds(r, col)) o.viewport[static_cast<std::size_t>(r) * kViewportCols + c] = level_.at(r, col);
    }
  }
  for (const auto& b : bodies_) {
    const double x = b.state.x;
    if (x >= o.viewport_origin_column && x < o.viewport_origin_column + kViewportCols) o.entities.push_back(b.state);
  }
  return o;
}

}  // namespace mario_rl
