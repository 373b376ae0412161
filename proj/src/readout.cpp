#include "intrvfl/readout.hpp"

#include "intrvfl/error.hpp"
#include "intrvfl/kernels.hpp"
#include "intrvfl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace intrvfl {
namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename T>
double glvq_cost_impl(std::span<const T> scores, std::span<const int> labels, std::size_t n_classes) {
  if (n_classes < 2) throw ValidationError("GLVQ cost needs at least 2 classes");
  if (scores.size() != labels.size() * n_classes) throw ValidationError("score matrix shape mismatch");
  std::vector<double> row(n_classes);
  double cost = 0.0;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    for (std::size_t l = 0; l < n_classes; ++l) row[l] = static_cast<double>(scores[m * n_classes + l]);
    cost += logistic(glvq_margin(row, labels[m]));
  }
  return cost;
}

using Genome = std::vector<std::int8_t>;

}  // namespace

IntReadout quantize_readout(const RealReadout& real, int boundary) {
  if (boundary < 1 || boundary > kMaxBoundary) {
    throw ConfigError("boundary", "must be in [1, " + std::to_string(kMaxBoundary) + "], got " + std::to_string(boundary));
  }
  if (!real.weights.allFinite()) throw ValidationError("cannot quantize a non-finite readout");
  IntReadout q;
  q.n_out = static_cast<std::size_t>(real.weights.rows());
  q.n_hidden = static_cast<std::size_t>(real.weights.cols());
  q.boundary = boundary;
  q.weights.assign(q.n_out * q.n_hidden, 0);
  const double max_abs = real.weights.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) {
    q.scale = 1.0;
    return q;
  }
  q.scale = max_abs / boundary;
  for (std::size_t l = 0; l < q.n_out; ++l) {
    for (std::size_t n = 0; n < q.n_hidden; ++n) {
      const double w = real.weights(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n));
      const double r = std::clamp(std::round(w / q.scale), -double(boundary), double(boundary));
      q.weights[l * q.n_hidden + n] = static_cast<std::int8_t>(r);
    }
  }
  return q;
}

double glvq_margin(std::span<const double> scores, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= scores.size()) throw ValidationError("label out of range");
  const double y_true = scores[static_cast<std::size_t>(label)];
  double y_runner = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < scores.size(); ++l) {
    if (static_cast<int>(l) != label) y_runner = std::max(y_runner, scores[l]);
  }
  return (y_runner - y_true) / (std::abs(y_true) + std::abs(y_runner) + kGlvqEpsilon);
}

double glvq_cost(std::span<const double> scores, std::span<const int> labels, std::size_t n_classes) {
  return glvq_cost_impl(scores, labels, n_classes);
}

double glvq_cost(std::span<const std::int32_t> scores, std::span<const int> labels, std::size_t n_classes) {
  return glvq_cost_impl(scores, labels, n_classes);
}

void GaConfig::validate() const {
  if (population < 2) throw ConfigError("ga.population", "must be >= 2");
  if (generations < 0) throw ConfigError("ga.generations", "must be >= 0");
  if (!(mutation_rate > 0.0 && mutation_rate < 1.0)) throw ConfigError("ga.mutation_rate", "must be in (0, 1)");
  if (!(elite_fraction >= 0.0 && elite_fraction < 1.0)) throw ConfigError("ga.elite_fraction", "must be in [0, 1)");
  if (tournament_size < 1) throw ConfigError("ga.tournament_size", "must be >= 1");
}

std::vector<std::int32_t> score_all(const IntHiddenSet& data, const IntReadout& readout) {
  if (data.n_hidden != readout.n_hidden) throw ValidationError("readout width does not match the hidden states");
  const std::size_t n_out = readout.n_out;
  std::vector<std::int32_t> scores(data.n_samples() * n_out);
  const auto& k = kernels::active();
  for (std::size_t m = 0; m < data.n_samples(); ++m) {
    k.int_scores(readout.weights.data(), n_out, data.values.data() + m * data.n_hidden, data.n_hidden,
                 scores.data() + m * n_out);
  }
  return scores;
}

double readout_cost(const IntHiddenSet& data, const IntReadout& readout) {
  return glvq_cost(std::span<const std::int32_t>(score_all(data, readout)), data.labels, readout.n_out);
}

double readout_accuracy(const IntHiddenSet& data, const IntReadout& readout) {
  if (data.n_samples() == 0) return 0.0;
  const auto scores = score_all(data, readout);
  std::size_t correct = 0;
  for (std::size_t m = 0; m < data.n_samples(); ++m) {
    const std::span<const std::int32_t> row(scores.data() + m * readout.n_out, readout.n_out);
    if (argmax(row) == data.labels[m]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.n_samples());
}

GaResult ga_refine(const std::optional<IntReadout>& init, const IntHiddenSet& train, int boundary,
                   const GaConfig& cfg, std::size_t jobs) {
  cfg.validate();
  if (boundary < 1 || boundary > kMaxBoundary) throw ConfigError("boundary", "must be in [1, 127]");
  if (train.n_classes < 2) throw ValidationError("GA needs at least 2 classes");
  plan_accumulator(train.n_hidden, train.kappa, boundary);

  const auto n_out = static_cast<std::size_t>(train.n_classes);
  const std::size_t n_genes = n_out * train.n_hidden;
  if (init) {
    if (init->n_out != n_out || init->n_hidden != train.n_hidden) throw ValidationError("initial readout shape mismatch");
    if (init->max_abs() > boundary) throw ValidationError("initial readout exceeds the boundary");
  }

  IntReadout shape;
  shape.n_out = n_out;
  shape.n_hidden = train.n_hidden;
  shape.boundary = boundary;
  shape.scale = init ? init->scale : 1.0;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> gene_value(-boundary, boundary);
  std::bernoulli_distribution coin(0.5);
  const auto pop_size = static_cast<std::size_t>(cfg.population);

  auto mutate = [&](Genome& g) {
    for (auto& v : g) {
      if (unit(rng) < cfg.mutation_rate) {
        const int step = coin(rng) ? 1 : -1;
        v = static_cast<std::int8_t>(std::clamp(int{v} + step, -boundary, boundary));
      }
    }
  };

  std::vector<Genome> pop(pop_size, Genome(n_genes));
  if (init) {
    pop[0] = init->weights;
    for (std::size_t p = 1; p < pop_size; ++p) {
      pop[p] = init->weights;
      mutate(pop[p]);
    }
  } else {
    for (auto& g : pop) {
      for (auto& v : g) v = static_cast<std::int8_t>(gene_value(rng));
    }
  }

  auto cost_of = [&](const Genome& g) {
    IntReadout r = shape;
    r.weights = g;
    return readout_cost(train, r);
  };
  std::vector<double> costs(pop_size);
  auto evaluate = [&](std::size_t from) {
    parallel_for(pop_size - from, jobs, [&](std::size_t i) { costs[from + i] = cost_of(pop[from + i]); });
  };
  evaluate(0);

  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(costs.begin(), costs.end()) - costs.begin());
  };

  GaResult result;
  result.initial_cost = init ? costs[0] : costs[best_index()];
  if (cfg.generations == 0 && init) {
    result.readout = *init;
    return result;
  }

  const std::size_t n_elite =
      std::clamp<std::size_t>(static_cast<std::size_t>(cfg.elite_fraction * static_cast<double>(pop_size)), 1, pop_size);
  std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
  auto tournament = [&]() -> std::size_t {
    std::size_t winner = pick(rng);
    for (int t = 1; t < cfg.tournament_size; ++t) {
      const std::size_t c = pick(rng);
      if (costs[c] < costs[winner] || (costs[c] == costs[winner] && c < winner)) winner = c;
    }
    return winner;
  };

  std::vector<std::size_t> order(pop_size);
  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });

    std::vector<Genome> next;
    std::vector<double> next_costs;
    next.reserve(pop_size);
    for (std::size_t e = 0; e < n_elite; ++e) {
      next.push_back(pop[order[e]]);
      next_costs.push_back(costs[order[e]]);
    }
    while (next.size() < pop_size) {
      const Genome& a = pop[tournament()];
      const Genome& b = pop[tournament()];
      Genome child(n_genes);
      for (std::size_t j = 0; j < n_genes; ++j) child[j] = coin(rng) ? a[j] : b[j];
      mutate(child);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    std::copy(next_costs.begin(), next_costs.end(), costs.begin());
    evaluate(n_elite);
    result.best_cost_history.push_back(costs[best_index()]);
  }

  result.readout = shape;
  // Elites sit at the front, so on ties the carried-over best wins.
  result.readout.weights = pop[best_index()];
  return result;
}

}  // namespace intrvfl
