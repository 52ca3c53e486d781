#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mario_rl/learning.hpp"

namespace mario_rl {

namespace {

std::string format_value(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

double parse_value(const std::string& s, int line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("checkpoint line " + std::to_string(line) + ": bad value '" + s + "'");
  return v;
}

bool parse_flag(const std::string& s, int line) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw std::runtime_error("checkpoint line " + std::to_string(line) + ": expected 0 or 1, got '" + s + "'");
}

Facing parse_facing(const std::string& s, int line) {
  if (s == "Left") return Facing::Left;
  if (s == "Right") return Facing::Right;
  throw std::runtime_error("checkpoint line " + std::to_string(line) + ": bad direction '" + s + "'");
}

DyBand parse_dy_band(const std::string& s, int line) {
  for (DyBand b : {DyBand::Above, DyBand::Level, DyBand::Below})
    if (to_string(b) == s) return b;
  throw std::runtime_error("checkpoint line " + std::to_string(line) + ": bad dy band '" + s + "'");
}

template <typename T>
std::vector<std::pair<std::uint32_t, double>> sorted(const T& table) {
  std::vector<std::pair<std::uint32_t, double>> out(table.begin(), table.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string save_qstore(const QStore& store) {
  std::ostringstream out;
  for (const auto& [bits, v] : sorted(store.flo_table())) {
    const auto k = FLOKey::unpack(bits);
    out << "FLO " << to_string(k.kind) << ' ' << to_string(k.target_bucket) << ' ' << to_string(k.target_direction)
        << ' ' << int(k.mario_on_ground) << ' ' << proposal_mask_string(k.proposed) << ' ' << format_value(v) << '\n';
  }
  for (const auto& [bits, v] : sorted(store.klo_table())) {
    const auto k = KLOKey::unpack(bits & 0x7ffu);
    const auto klo = static_cast<KLO>(bits >> 11);
    out << "KLO " << to_string(k.flo_kind) << ' ' << to_string(k.dx_bucket) << ' ' << to_string(k.dy_band) << ' '
        << to_string(k.target_direction) << ' ' << int(k.mario_on_ground) << ' ' << int(k.fire_ready) << ' '
        << to_string(klo) << ' ' << format_value(v) << '\n';
  }
  return out.str();
}

QStore load_qstore(std::string_view text) {
  QStore store;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    try {
      if (tag == "FLO") {
        std::string kind, bucket, dir, ground, mask, value;
        if (!(fields >> kind >> bucket >> dir >> ground >> mask >> value)) throw std::runtime_error("too few fields");
        FLOKey k{flo_kind_from_string(kind), distance_bucket_from_string(bucket), parse_facing(dir, line_no),
                 parse_flag(ground, line_no), proposal_mask_from_string(mask)};
        store.set(k, parse_value(value, line_no));
      } else if (tag == "KLO") {
        std::string kind, dxb, dyb, dir, ground, fire, klo, value;
        if (!(fields >> kind >> dxb >> dyb >> dir >> ground >> fire >> klo >> value))
          throw std::runtime_error("too few fields");
        KLOKey k{flo_kind_from_string(kind),  distance_bucket_from_string(dxb), parse_dy_band(dyb, line_no),
                 parse_facing(dir, line_no), parse_flag(ground, line_no),      parse_flag(fire, line_no)};
        store.set(KLOEntry{k, klo_from_string(klo)}, parse_value(value, line_no));
      } else {
        throw std::runtime_error("unknown record '" + tag + "'");
      }
      std::string extra;
      if (fields >> extra) throw std::runtime_error("trailing fields");
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("checkpoint line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("checkpoint line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return store;
}

}  // namespace mario_rl
