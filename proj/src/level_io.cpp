#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mario_rl/env.hpp"

namespace mario_rl {

namespace {

constexpr char kTileChars[kTileKindCount] = {'.', '#', 'B', '?', 'U', 'c', '|', 'T', '-', 'F'};

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw std::runtime_error("level file line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

template <typename T>
T parse_number(std::string_view s, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    parse_error(line, "bad number '" + std::string(s) + "'");
  return value;
}

std::string_view expect_key(std::string_view token, std::string_view key, int line) {
  if (token.substr(0, key.size()) != key) parse_error(line, "expected '" + std::string(key) + "'");
  return token.substr(key.size());
}

}  // namespace

bool is_solid(TileKind t) {
  switch (t) {
    case TileKind::Ground:
    case TileKind::Brick:
    case TileKind::QuestionBlock:
    case TileKind::UsedBlock:
    case TileKind::PipeBody:
    case TileKind::PipeTop:
    case TileKind::Platform:
      return true;
    default:
      return false;
  }
}

char tile_char(TileKind t) { return kTileChars[static_cast<int>(t)]; }

TileKind tile_from_char(char c) {
  for (int i = 0; i < kTileKindCount; ++i)
    if (kTileChars[i] == c) return static_cast<TileKind>(i);
  throw std::invalid_argument(std::string("unknown tile character '") + c + "'");
}

std::string_view to_string(Facing f) { return f == Facing::Left ? "Left" : "Right"; }
std::string_view to_string(EntityKind k) { return k == EntityKind::Walker ? "Walker" : "Fireball"; }

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Running: return "Running";
    case Outcome::Finished: return "Finished";
    case Outcome::Died: return "Died";
    case Outcome::TimedOut: return "TimedOut";
  }
  return "?";
}

Outcome outcome_from_string(std::string_view s) {
  for (Outcome o : {Outcome::Running, Outcome::Finished, Outcome::Died, Outcome::TimedOut})
    if (to_string(o) == s) return o;
  throw std::invalid_argument("unknown outcome '" + std::string(s) + "'");
}

std::string validate_level(const Level& level) {
  if (level.width < kMinLevelWidth) return "width below minimum";
  if (level.tiles.size() != static_cast<std::size_t>(kLevelRows) * level.width)
    return "tile grid size does not match 16 x width";
  if (level.finish_column < 0 || level.finish_column >= level.width) return "finish_column out of range";

  int pole_column = -1;
  for (int c = 0; c < level.width; ++c) {
    for (int r = 0; r < kLevelRows; ++r) {
      if (level.at(r, c) != TileKind::FinishPole) continue;
      if (pole_column >= 0 && pole_column != c) return "FinishPole tiles in more than one column";
      pole_column = c;
    }
  }
  if (pole_column < 0) return "no FinishPole column";
  if (pole_column != level.finish_column) return "finish_column does not match the FinishPole column";

  // Pits: maximal runs of bottom-row columns without Ground, flanked by Ground.
  for (int c = 0; c < level.width;) {
    if (level.at(kGroundRow, c) == TileKind::Ground) {
      ++c;
      continue;
    }
    const int first = c;
    while (c < level.width && level.at(kGroundRow, c) != TileKind::Ground) ++c;
    if (first == 0 || c == level.width)
      return "pit at columns " + std::to_string(first) + ".." + std::to_string(c - 1) +
             " lacks a Ground flank";
  }
  if (level.at(kGroundRow, kSpawnColumn) != TileKind::Ground) return "no Ground under the spawn column";

  for (const auto& m : level.monster_spawns)
    if (!level.in_bounds(m.row, m.column)) return "monster spawn outside the level";
  return {};
}

std::string dump_level(const Level& level) {
  std::ostringstream out;
  out << "w=" << level.width << " finish=" << level.finish_column << " seed=" << level.seed << '\n';
  for (int r = 0; r < kLevelRows; ++r) {
    std::string row(static_cast<std::size_t>(level.width), '.');
    for (int c = 0; c < level.width; ++c) row[c] = tile_char(level.at(r, c));
    out << row << '\n';
  }
  for (const auto& m : level.monster_spawns)
    out << "monster " << to_string(m.kind) << ' ' << m.column << ' ' << m.row << ' ' << to_string(m.facing)
        << '\n';
  return out.str();
}

Level load_level(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) parse_error(1, "empty input");

  Level level;
  {
    std::istringstream header{std::string(lines[0])};
    std::string w, finish, seed, extra;
    if (!(header >> w >> finish >> seed) || (header >> extra)) parse_error(1, "malformed header");
    level.width = parse_number<int>(expect_key(w, "w=", 1), 1);
    level.finish_column = parse_number<int>(expect_key(finish, "finish=", 1), 1);
    level.seed = parse_number<std::uint64_t>(expect_key(seed, "seed=", 1), 1);
  }
  if (level.width < kMinLevelWidth) parse_error(1, "width below minimum");
  if (lines.size() < 1 + static_cast<std::size_t>(kLevelRows)) parse_error(static_cast<int>(lines.size()), "missing tile rows");

  level.tiles.reserve(static_cast<std::size_t>(kLevelRows) * level.width);
  for (int r = 0; r < kLevelRows; ++r) {
    const auto row = lines[1 + r];
    if (static_cast<int>(row.size()) != level.width) parse_error(r + 2, "row length differs from width");
    for (char ch : row) {
      try {
        level.tiles.push_back(tile_from_char(ch));
      } catch (const std::invalid_argument& e) {
        parse_error(r + 2, e.what());
      }
    }
  }

  for (std::size_t i = 1 + kLevelRows; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      parse_error(line, "blank line");
    }
    std::istringstream in{std::string(lines[i])};
    std::string tag, kind, col, row, facing, extra;
    if (!(in >> tag >> kind >> col >> row >> facing) || (in >> extra) || tag != "monster")
      parse_error(line, "expected 'monster <kind> <col> <row> <facing>'");
    MonsterSpawn m;
    if (kind == "Walker") m.kind = EntityKind::Walker;
    else parse_error(line, "unknown monster kind '" + kind + "'");
    m.column = parse_number<int>(col, line);
    m.row = parse_number<int>(row, line);
    if (facing == "Left") m.facing = Facing::Left;
    else if (facing == "Right") m.facing = Facing::Right;
    else parse_error(line, "unknown facing '" + facing + "'");
    level.monster_spawns.push_back(m);
  }
  return level;
}

}  // namespace mario_rl
