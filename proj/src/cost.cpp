#include "intrvfl/cost.hpp"

#include "intrvfl/error.hpp"
#include "intrvfl/intrvfl.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace intrvfl {
namespace {

constexpr std::array<std::string_view, kOpCount> kOpNames{
    "quantize", "sign_flip", "int_add", "int_compare", "int_mac", "real_mac", "real_add", "sigmoid_eval"};

void add(StageCost& stage, Op op, std::uint64_t n, const CostProfile& profile) {
  stage.counts[static_cast<std::size_t>(op)] += n;
  stage.energy += static_cast<double>(n) * profile[op];
}

nlohmann::json stage_json(const StageCost& s) {
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t i = 0; i < kOpCount; ++i) {
    if (s.counts[i] != 0) counts[std::string(kOpNames[i])] = s.counts[i];
  }
  return {{"ops", counts}, {"energy", s.energy}, {"bit_width", s.bit_width}};
}

}  // namespace

std::string_view op_name(Op op) noexcept { return kOpNames[static_cast<std::size_t>(op)]; }

CostProfile CostProfile::default_profile() {
  CostProfile p;
  p[Op::quantize] = 4.6;
  p[Op::sign_flip] = 0.03;
  p[Op::int_add] = 0.03;
  p[Op::int_compare] = 0.03;
  p[Op::int_mac] = 0.3;
  p[Op::real_mac] = 4.6;
  p[Op::real_add] = 0.9;
  p[Op::sigmoid_eval] = 20.0;
  return p;
}

void CostProfile::validate() const {
  for (std::size_t i = 0; i < kOpCount; ++i) {
    if (!std::isfinite(energy[i]) || energy[i] < 0.0) {
      throw ConfigError("cost_profile." + std::string(kOpNames[i]), "must be finite and >= 0");
    }
  }
}

CostProfile profile_from_json(const nlohmann::json& j) {
  CostProfile p = CostProfile::default_profile();
  if (!j.is_object()) throw ConfigError("cost_profile", "expected an object of op -> energy");
  for (const auto& [key, value] : j.items()) {
    std::size_t idx = kOpCount;
    for (std::size_t i = 0; i < kOpCount; ++i) {
      if (kOpNames[i] == key) idx = i;
    }
    if (idx == kOpCount) throw ConfigError("cost_profile." + key, "unknown operation");
    if (!value.is_number()) throw ConfigError("cost_profile." + key, "must be a number");
    p.energy[idx] = value.get<double>();
  }
  p.validate();
  return p;
}

nlohmann::json profile_to_json(const CostProfile& profile) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kOpCount; ++i) j[std::string(kOpNames[i])] = profile.energy[i];
  return j;
}

CostProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cost_profile", "cannot open " + path.string());
  try {
    return profile_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cost_profile", e.what());
  }
}

InferenceCost count_ops(const CostSpec& spec, const CostProfile& profile) {
  const std::uint64_t k = spec.n_features;
  const std::uint64_t n = spec.n_hidden;
  const std::uint64_t l = spec.n_classes;
  InferenceCost c;
  if (spec.integer_network) {
    add(c.encoding, Op::quantize, k, profile);
    while ((std::uint64_t{1} << c.encoding.bit_width) < n + 1) ++c.encoding.bit_width;  // levels 0..N
    add(c.hidden, Op::sign_flip, n * k, profile);
    add(c.hidden, Op::int_add, n * (k > 0 ? k - 1 : 0), profile);
    add(c.hidden, Op::int_compare, n, profile);
    c.hidden_accumulator_bits = bits_for_symmetric_range(static_cast<std::int64_t>(k));
    c.neuron_bits = bits_for_symmetric_range(spec.kappa);
    c.hidden.bit_width = c.hidden_accumulator_bits;
    if (spec.boundary > 0) {
      add(c.readout, Op::int_mac, l * n, profile);
      c.readout_accumulator_bits =
          bits_for_symmetric_range(static_cast<std::int64_t>(n) * spec.kappa * spec.boundary);
    } else {
      add(c.readout, Op::real_mac, l * n, profile);
      c.readout_accumulator_bits = 64;
    }
  } else {
    add(c.hidden, Op::real_mac, n * k, profile);
    add(c.hidden, Op::real_add, n, profile);
    add(c.hidden, Op::sigmoid_eval, n, profile);
    c.hidden_accumulator_bits = 64;
    c.neuron_bits = 64;
    c.hidden.bit_width = 64;
    add(c.readout, Op::real_mac, l * n, profile);
    c.readout_accumulator_bits = 64;
  }
  c.readout.bit_width = c.readout_accumulator_bits;
  c.total = c.encoding.energy + c.hidden.energy + c.readout.energy;
  return c;
}

nlohmann::json cost_to_json(const InferenceCost& cost) {
  return {{"encoding", stage_json(cost.encoding)},
          {"hidden", stage_json(cost.hidden)},
          {"readout", stage_json(cost.readout)},
          {"total", cost.total},
          {"bits", {{"hidden_accumulator", cost.hidden_accumulator_bits},
                    {"neuron", cost.neuron_bits},
                    {"readout_accumulator", cost.readout_accumulator_bits}}}};
}

BudgetResult max_hidden_under_budget(const CostSpec& spec, const CostProfile& profile, double budget) {
  profile.validate();
  auto total = [&](std::size_t n_hidden) {
    CostSpec s = spec;
    s.n_hidden = n_hidden;
    return count_ops(s, profile).total;
  };
  const double at_one = total(1);
  if (total(2) <= at_one) {
    throw ConfigError("cost_profile", "hidden neurons cost nothing under this profile; admissible N is unbounded");
  }
  if (at_one > budget) return {};

  std::size_t lo = 1;  // fits
  std::size_t hi = 2;  // candidate upper bracket
  while (total(hi) <= budget) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (total(mid) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {true, lo, total(lo)};
}

}  // namespace intrvfl
