#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "mario_rl/operators.hpp"
#include "mario_rl/perception.hpp"
#include "mario_rl/rng.hpp"

namespace mario_rl {

struct LearningParams {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon0 = 0.2;
  double epsilon_decay = 0.999;
  double epsilon_min = 0.01;

  // Throws std::invalid_argument when a field is outside its domain.
  void validate() const;
};

struct FLOKey {
  FLOKind kind = FLOKind::Advance;
  DistanceBucket target_bucket = DistanceBucket::OutOfRange;
  Facing target_direction = Facing::Right;
  bool mario_on_ground = false;
  // Bit i set when a FLO of kind i (Advance excluded) is proposed alongside.
  std::uint8_t proposed = 0;

  std::uint32_t pack() const;
  static FLOKey unpack(std::uint32_t bits);
  bool operator==(const FLOKey&) const = default;
};

enum class DyBand : std::uint8_t { Above, Level, Below };
std::string_view to_string(DyBand b);
DyBand dy_band(int dy);

struct KLOKey {
  FLOKind flo_kind = FLOKind::Advance;
  DistanceBucket dx_bucket = DistanceBucket::OutOfRange;
  DyBand dy_band = DyBand::Level;
  Facing target_direction = Facing::Right;
  bool mario_on_ground = false;
  bool fire_ready = false;

  std::uint32_t pack() const;
  static KLOKey unpack(std::uint32_t bits);
  bool operator==(const KLOKey&) const = default;
};

struct KLOEntry {
  KLOKey key;
  KLO klo = KLO::NoOp;

  std::uint32_t pack() const;
  bool operator==(const KLOEntry&) const = default;
};

std::string proposal_mask_string(std::uint8_t mask);  // letters TGQP, "-" when empty
std::uint8_t proposal_mask_from_string(std::string_view s);

FLOKey make_flo_key(const RelationalState& state, const FLOInstance& flo, std::uint8_t proposed);
FLOKey make_flo_key(const RelationalState& state, const FLOInstance& flo);
// For Advance the key describes the nearest pit or pipe ahead, else the Finish
// object, or (OutOfRange, Level, Right) when neither is in view.
KLOKey make_klo_key(const RelationalState& state, const FLOInstance& flo);

// Two tabular maps of numeric preferences. Missing entries read as 0.
class QStore {
 public:
  double value(const FLOKey& key) const;
  double value(const KLOEntry& entry) const;

  // Throws std::invalid_argument for non-finite values.
  void set(const FLOKey& key, double v);
  void set(const KLOEntry& entry, double v);

  std::size_t flo_size() const { return flo_values_.size(); }
  std::size_t klo_size() const { return klo_values_.size(); }
  double max_abs_value() const;

  const std::unordered_map<std::uint32_t, double>& flo_table() const { return flo_values_; }
  const std::unordered_map<std::uint32_t, double>& klo_table() const { return klo_values_; }

  bool operator==(const QStore&) const = default;

 private:
  std::unordered_map<std::uint32_t, double> flo_values_;
  std::unordered_map<std::uint32_t, double> klo_values_;
};

inline double q_value(const QStore& store, const FLOKey& key) { return store.value(key); }
inline double q_value(const QStore& store, const KLOEntry& entry) { return store.value(entry); }

// Epsilon-greedy over `values`; greedy ties go to the smallest index.
// Throws std::invalid_argument on an empty candidate list.
std::size_t select(std::span<const double> values, double epsilon, Rng& rng);
std::size_t argmax_first(std::span<const double> values);

// Q(s,a) <- Q(s,a) + alpha [r + gamma Q(s',a') - Q(s,a)], Q(s',a') = 0 when
// next is empty (terminal). Returns the stored value.
double sarsa_update(QStore& store, const KLOEntry& key, double reward, const std::optional<KLOEntry>& next,
                    double alpha, double gamma);
double sarsa_update(QStore& store, const FLOKey& key, double reward, const std::optional<FLOKey>& next,
                    double alpha, double gamma);

// Semi-Markov form for a substate lasting `duration` ticks with discounted
// reward sum `discounted_return`:
// Q <- Q + alpha [R + gamma^k Q(s',o') - Q]. Throws when duration < 1.
double smdp_flo_update(QStore& store, const FLOKey& key, double discounted_return, int duration,
                       const std::optional<FLOKey>& next, double alpha, double gamma);

// Line-oriented text checkpoint, entries sorted, values with 9 significant
// digits.
std::string save_qstore(const QStore& store);
QStore load_qstore(std::string_view text);

}  // namespace mario_rl
