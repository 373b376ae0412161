#pragma once

// Abstract per-inference cost of both networks: exact operation counts per
// stage weighted by a configurable energy table. Units are whatever the
// profile uses; only ratios between models are meaningful.

#include <json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>

namespace intrvfl {

enum class Op : std::size_t {
  quantize,      // feature -> level: one real multiply and a rounding
  sign_flip,
  int_add,
  int_compare,   // one clip
  int_mac,
  real_mac,
  real_add,
  sigmoid_eval,
};
inline constexpr std::size_t kOpCount = 8;

std::string_view op_name(Op op) noexcept;

struct CostProfile {
  std::array<double, kOpCount> energy{};

  [[nodiscard]] double operator[](Op op) const noexcept { return energy[static_cast<std::size_t>(op)]; }
  double& operator[](Op op) noexcept { return energy[static_cast<std::size_t>(op)]; }

  // Rough per-operation energies in pJ for a 45 nm process: 8-bit integer
  // add/compare/negate 0.03, 8-bit multiply plus 32-bit accumulate 0.3,
  // fp32 multiply-add 4.6, fp32 add 0.9, sigmoid (exp + reciprocal) 20.
  static CostProfile default_profile();

  // Throws ConfigError on negative or non-finite entries.
  void validate() const;
};

CostProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const CostProfile& profile);
CostProfile load_profile(const std::filesystem::path& path);

struct CostSpec {
  bool integer_network = true;  // false: sigmoid baseline
  std::size_t n_features = 16;
  std::size_t n_hidden = 512;
  std::size_t n_classes = 4;
  int kappa = 3;
  int boundary = 15;  // 0 selects a real-valued readout
};

struct StageCost {
  std::array<std::uint64_t, kOpCount> counts{};
  double energy = 0.0;
  int bit_width = 0;  // widest value this stage produces or accumulates

  [[nodiscard]] std::uint64_t operator[](Op op) const noexcept { return counts[static_cast<std::size_t>(op)]; }
};

struct InferenceCost {
  StageCost encoding;
  StageCost hidden;
  StageCost readout;
  double total = 0.0;
  int hidden_accumulator_bits = 0;
  int neuron_bits = 0;
  int readout_accumulator_bits = 0;
};

InferenceCost count_ops(const CostSpec& spec, const CostProfile& profile);

nlohmann::json cost_to_json(const InferenceCost& cost);

struct BudgetResult {
  bool feasible = false;
  std::size_t n_hidden = 0;
  double cost = 0.0;  // total at n_hidden
};

// Largest N whose total cost fits `budget` (spec.n_hidden is ignored). Cost is
// affine in N, so a binary search over a doubling bracket is exact. A profile
// that makes N free throws ConfigError: no finite answer exists.
BudgetResult max_hidden_under_budget(const CostSpec& spec, const CostProfile& profile, double budget);

}  // namespace intrvfl
