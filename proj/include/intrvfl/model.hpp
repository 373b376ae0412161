#pragma once

#include "intrvfl/data.hpp"
#include "intrvfl/readout.hpp"
#include "intrvfl/ridge.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace intrvfl {

enum class ModelFamily { rvfl, intrvfl };

std::string_view to_string(ModelFamily family) noexcept;
ModelFamily parse_family(std::string_view text);

enum class ReadoutKind { real, quantized, ga, ga_from_quantized };

// "real", "quantized:B", "ga:B" or "ga-from-quantized:B".
struct ReadoutMode {
  ReadoutKind kind = ReadoutKind::real;
  int boundary = 0;

  static ReadoutMode parse(std::string_view text);
  [[nodiscard]] std::string str() const;
  [[nodiscard]] bool integer() const noexcept { return kind != ReadoutKind::real; }
  [[nodiscard]] int levels() const noexcept { return 2 * boundary + 1; }
  [[nodiscard]] bool uses_ga() const noexcept { return kind == ReadoutKind::ga || kind == ReadoutKind::ga_from_quantized; }

  friend bool operator==(const ReadoutMode&, const ReadoutMode&) = default;
};

struct ModelSpec {
  ModelFamily family = ModelFamily::intrvfl;
  std::size_t n_hidden = 100;
  double lambda = 1.0;
  int kappa = 3;  // ignored by the baseline
  ReadoutMode readout;

  void validate() const;
};

HiddenLayer make_hidden_layer(const ModelSpec& spec, std::size_t n_features, std::uint64_t seed);

using Readout = std::variant<RealReadout, IntReadout>;

// A trained classifier. The random projection is regenerated from `seed` and
// never stored.
struct Model {
  ModelSpec spec;
  std::size_t n_features = 0;
  int n_classes = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  Normalizer normalizer;
  HiddenLayer layer;
  Readout readout;

  // Raw (unnormalized) features in, class index out.
  [[nodiscard]] int predict(std::span<const double> x) const;
  // Batch form; real readouts score all rows with one matrix product.
  [[nodiscard]] std::vector<int> predict(const Eigen::MatrixXd& x) const;
  [[nodiscard]] double accuracy(const Dataset& ds) const;
};

// Row-wise argmax of a score matrix, ties to the lowest class.
std::vector<int> argmax_rows(const Eigen::MatrixXd& scores);

// Hidden states of the integer layer for already normalized rows.
IntHiddenSet collect_int_hidden(const IntHiddenLayer& layer, const Eigen::MatrixXd& normalized,
                                std::span<const int> labels, int n_classes);

// Fits the normalizer on `train`, solves the ridge readout and converts it per
// spec.readout. GA modes use `ga` (its seed included) on `train` only.
Model train_model(const ModelSpec& spec, const Dataset& train, std::uint64_t seed, const GaConfig& ga = {},
                  std::size_t jobs = 1);

// Readout conversion shared by training and evaluation.
Readout make_readout(const ModelSpec& spec, const RealReadout& ridge, const IntHiddenSet* train_hidden,
                     const GaConfig& ga, std::size_t jobs);

nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace intrvfl
