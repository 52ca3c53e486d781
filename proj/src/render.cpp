#include <bit>
#include <cmath>
#include <cstring>

#include "mario_rl/env.hpp"

namespace mario_rl {

namespace {

char entity_glyph(const EntityState& e) {
  if (e.kind == EntityKind::Fireball) return '*';
  return e.alive ? 'W' : 'w';
}

class Fnv1a {
 public:
  explicit Fnv1a(std::uint64_t seed) : h_(seed) {}
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof bits);
  }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_;
};

}  // namespace

std::string render_ascii(const Observation& o) {
  std::string grid(static_cast<std::size_t>(kViewportRows) * kViewportCols, ' ');
  for (std::size_t i = 0; i < grid.size() && i < o.viewport.size(); ++i)
    grid[i] = o.viewport[i] == TileKind::Empty ? ' ' : tile_char(o.viewport[i]);

  auto put = [&](int row, int col, char glyph) {
    const int vc = col - o.viewport_origin_column;
    if (row < 0 || row >= kViewportRows || vc < 0 || vc >= kViewportCols) return;
    grid[static_cast<std::size_t>(row) * kViewportCols + vc] = glyph;
  };
  for (const auto& e : o.entities) put(entity_row(e), entity_column(e), entity_glyph(e));
  put(mario_row(o.mario), mario_column(o.mario), 'M');

  std::string out;
  out.reserve(grid.size() + kViewportRows);
  for (int r = 0; r < kViewportRows; ++r) {
    out.append(grid, static_cast<std::size_t>(r) * kViewportCols, kViewportCols);
    out.push_back('\n');
  }
  return out;
}

std::uint64_t hash_observation(const Observation& o, std::uint64_t seed) {
  Fnv1a h(seed);
  h.bytes(o.viewport.data(), o.viewport.size());
  h.i64(o.viewport_origin_column);
  h.i64(o.tick);
  const auto& m = o.mario;
  for (double v : {m.x, m.y, m.vx, m.vy}) h.f64(v);
  h.i64(m.on_ground);
  h.i64(m.fire_cooldown);
  h.i64(m.alive);
  h.i64(m.max_column_reached);
  h.i64(static_cast<int>(m.facing));
  for (const auto& e : o.entities) {
    h.i64(e.id);
    h.i64(static_cast<int>(e.kind));
    for (double v : {e.x, e.y, e.vx, e.vy}) h.f64(v);
    h.i64(e.alive);
    h.i64(static_cast<int>(e.facing));
  }
  return h.value();
}

}  // namespace mario_rl
