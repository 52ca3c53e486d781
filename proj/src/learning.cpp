#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mario_rl/learning.hpp"

namespace mario_rl {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

void require_step_params(double alpha, double gamma) {
  if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(gamma >= 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in [0, 1)");
}

template <typename Key>
double td_update(QStore& store, const Key& key, double target, double alpha) {
  const double q = store.value(key);
  const double updated = q + alpha * (target - q);
  store.set(key, updated);
  return updated;
}

}  // namespace

void LearningParams::validate() const {
  require_step_params(alpha, gamma);
  if (!(epsilon0 >= 0 && epsilon0 <= 1)) throw std::invalid_argument("epsilon0 must lie in [0, 1]");
  if (!(epsilon_decay > 0 && epsilon_decay <= 1)) throw std::invalid_argument("epsilon_decay must lie in (0, 1]");
  if (!(epsilon_min >= 0 && epsilon_min <= 1)) throw std::invalid_argument("epsilon_min must lie in [0, 1]");
}

std::uint32_t FLOKey::pack() const {
  return static_cast<std::uint32_t>(kind) | static_cast<std::uint32_t>(target_bucket) << 3 |
         static_cast<std::uint32_t>(target_direction) << 6 | static_cast<std::uint32_t>(mario_on_ground) << 7 | static_cast<std::uint32_t>(proposed) << 8;
}

FLOKey FLOKey::unpack(std::uint32_t bits) {
  return {static_cast<FLOKind>(bits & 7), static_cast<DistanceBucket>(bits >> 3 & 7),
          static_cast<Facing>(bits >> 6 & 1), (bits >> 7 & 1) != 0, static_cast<std::uint8_t>(bits >> 8 & 15)};
}

std::string_view to_string(DyBand b) {
  switch (b) {
    case DyBand::Above: return "Above";
    case DyBand::Level: return "Level";
    case DyBand::Below: return "Below";
  }
  return "?";
}

DyBand dy_band(int dy) {
  if (dy < -1) return DyBand::Above;
  if (dy > 1) return DyBand::Below;
  return DyBand::Level;
}

std::uint32_t KLOKey::pack() const {
  return static_cast<std::uint32_t>(flo_kind) | static_cast<std::uint32_t>(dx_bucket) << 3 |
         static_cast<std::uint32_t>(dy_band) << 6 | static_cast<std::uint32_t>(target_direction) << 8 |
         static_cast<std::uint32_t>(mario_on_ground) << 9 | static_cast<std::uint32_t>(fire_ready) << 10;
}

KLOKey KLOKey::unpack(std::uint32_t bits) {
  return {static_cast<FLOKind>(bits & 7),   static_cast<DistanceBucket>(bits >> 3 & 7),
          static_cast<DyBand>(bits >> 6 & 3), static_cast<Facing>(bits >> 8 & 1),
          (bits >> 9 & 1) != 0,              (bits >> 10 & 1) != 0};
}

std::uint32_t KLOEntry::pack() const { return key.pack() | static_cast<std::uint32_t>(klo) << 11; }

namespace {
constexpr char kMaskLetters[] = {'T', 'G', 'Q', 'P'};
}

std::string proposal_mask_string(std::uint8_t mask) {
  std::string out;
  for (int i = 0; i < 4; ++i)
    if (mask >> i & 1) out += kMaskLetters[i];
  return out.empty() ? "-" : out;
}

std::uint8_t proposal_mask_from_string(std::string_view s) {
  if (s == "-") return 0;
  std::uint8_t mask = 0;
  int last = -1;
  for (char c : s) {
    const auto it = std::find(std::begin(kMaskLetters), std::end(kMaskLetters), c);
    const int i = static_cast<int>(it - std::begin(kMaskLetters));
    if (it == std::end(kMaskLetters) || i <= last) throw std::invalid_argument("bad proposal mask '" + std::string(s) + "'");
    mask |= static_cast<std::uint8_t>(1u << i);
    last = i;
  }
  if (s.empty()) throw std::invalid_argument("empty proposal mask");
  return mask;
}

FLOKey make_flo_key(const RelationalState& state, const FLOInstance& flo) {
  return make_flo_key(state, flo, proposal_mask(propose_flos(state)));
}

FLOKey make_flo_key(const RelationalState& state, const FLOInstance& flo, std::uint8_t proposed) {
  FLOKey key;
  key.kind = flo.kind;
  key.mario_on_ground = state.mario_on_ground;
  key.proposed = proposed;
  if (flo.kind == FLOKind::Advance || !flo.target) return key;
  if (const auto* f = state.find(*flo.target)) {
    key.target_bucket = f->bucket;
    key.target_direction = f->direction;
  }
  return key;
}

KLOKey make_klo_key(const RelationalState& state, const FLOInstance& flo) {
  KLOKey key;
  key.flo_kind = flo.kind;
  key.mario_on_ground = state.mario_on_ground;
  key.fire_ready = state.mario_fire_ready;

  const RelationalFact* f = nullptr;
  if (flo.kind == FLOKind::Advance) {
    for (const auto& fact : state.facts)
      if ((fact.kind() == ObjectKind::Pipe || fact.kind() == ObjectKind::Pit) && fact.dx > 0 && (!f || fact.dx < f->dx))
        f = &fact;
    if (!f)
      for (const auto& fact : state.facts)
        if (fact.kind() == ObjectKind::Finish) {
          f = &fact;
          break;
        }
  } else if (flo.target) {
    f = state.find(*flo.target);
  }
  if (f) {
    key.dx_bucket = f->bucket;
    key.dy_band = dy_band(f->dy);
    key.target_direction = f->direction;
  }
  return key;
}

double QStore::value(const FLOKey& key) const {
  const auto it = flo_values_.find(key.pack());
  return it == flo_values_.end() ? 0.0 : it->second;
}

double QStore::value(const KLOEntry& entry) const {
  const auto it = klo_values_.find(entry.pack());
  return it == klo_values_.end() ? 0.0 : it->second;
}

void QStore::set(const FLOKey& key, double v) {
  require_finite(v, "Q value");
  flo_values_[key.pack()] = v;
}

void QStore::set(const KLOEntry& entry, double v) {
  require_finite(v, "Q value");
  klo_values_[entry.pack()] = v;
}

double QStore::max_abs_value() const {
  double m = 0;
  for (const auto& [k, v] : flo_values_) m = std::max(m, std::abs(v));
  for (const auto& [k, v] : klo_values_) m = std::max(m, std::abs(v));
  return m;
}

std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("select: empty candidate list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

std::size_t select(std::span<const double> values, double epsilon, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("select: empty candidate list");
  if (epsilon > 0 && uniform01(rng) < epsilon) return static_cast<std::size_t>(uniform_index(rng, values.size()));
  return argmax_first(values);
}

double sarsa_update(QStore& store, const KLOEntry& key, double reward, const std::optional<KLOEntry>& next,
                    double alpha, double gamma) {
  require_finite(reward, "reward");
  require_step_params(alpha, gamma);
  const double next_q = next ? store.value(*next) : 0.0;
  return td_update(store, key, reward + gamma * next_q, alpha);
}

double sarsa_update(QStore& store, const FLOKey& key, double reward, const std::optional<FLOKey>& next,
                    double alpha, double gamma) {
  require_finite(reward, "reward");
  require_step_params(alpha, gamma);
  const double next_q = next ? store.value(*next) : 0.0;
  return td_update(store, key, reward + gamma * next_q, alpha);
}

double smdp_flo_update(QStore& store, const FLOKey& key, double discounted_return, int duration,
                       const std::optional<FLOKey>& next, double alpha, double gamma) {
  if (duration < 1) throw std::invalid_argument("smdp_flo_update: duration must be at least one tick");
  require_finite(discounted_return, "discounted return");
  require_step_params(alpha, gamma);
  const double next_q = next ? store.value(*next) : 0.0;
  double discount = 1.0;
  for (int i = 0; i < duration; ++i) discount *= gamma;
  return td_update(store, key, discounted_return + discount * next_q, alpha);
}

}  // namespace mario_rl
