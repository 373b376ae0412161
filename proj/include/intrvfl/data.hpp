#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace intrvfl {

// Labeled classification data. Rows are samples, columns are features.
struct Dataset {
  Eigen::MatrixXd features;         // M x K
  std::vector<int> labels;          // M entries in [0, n_classes)
  int n_classes = 0;
  std::vector<std::string> class_names;  // first-appearance order
  std::string name;

  [[nodiscard]] std::size_t n_samples() const noexcept { return labels.size(); }
  [[nodiscard]] std::size_t n_features() const noexcept { return static_cast<std::size_t>(features.cols()); }

  // Throws ValidationError unless M >= 2, K >= 1, L >= 2 and every class occurs.
  void validate() const;

  // Subset of rows, class bookkeeping kept as is (a subset may miss classes).
  [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
};

struct CsvOptions {
  char delimiter = ',';
  // Column index (negative counts from the end) or header name.
  std::variant<int, std::string> label_column = -1;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Per-feature min/max scaling to [0, 1], fit on training rows only.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> min, std::vector<double> max);

  [[nodiscard]] static Normalizer fit(const Eigen::MatrixXd& train);

  // Values outside the fit range are clipped; constant features map to 0.
  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
  [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;

  [[nodiscard]] const std::vector<double>& min() const noexcept { return min_; }
  [[nodiscard]] const std::vector<double>& max() const noexcept { return max_; }
  [[nodiscard]] std::size_t n_features() const noexcept { return min_.size(); }
  // Indices of features whose fit range was degenerate.
  [[nodiscard]] std::vector<std::size_t> constant_features() const;

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

Eigen::MatrixXd one_hot(std::span<const int> labels, int n_classes);

struct FoldPlan {
  int n_folds = 0;
  std::vector<int> assignment;  // fold index per sample
  std::uint64_t seed = 0;

  [[nodiscard]] std::vector<std::size_t> train_rows(int fold) const;
  [[nodiscard]] std::vector<std::size_t> test_rows(int fold) const;
};

// Stratified assignment: each class is shuffled with `seed` and dealt
// round-robin over the folds, starting where the previous class stopped.
FoldPlan make_folds(const Dataset& ds, int n_folds, std::uint64_t seed);

}  // namespace intrvfl
