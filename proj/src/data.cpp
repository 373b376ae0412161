#include "intrvfl/data.hpp"

#include "intrvfl/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <unordered_map>

namespace intrvfl {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double-quoted fields may contain the delimiter and
// "" escapes; multi-line fields are not supported.
std::vector<std::string> split_record(std::string_view line, char delim) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      cells.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.emplace_back(trim(cur));
  return cells;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw ValidationError("feature rows and label count differ");
  }
  if (labels.size() < 2) throw ValidationError("dataset needs at least 2 samples");
  if (features.cols() < 1) throw ValidationError("dataset needs at least 1 feature");
  if (n_classes < 2) throw ValidationError("dataset has a single class");
  std::vector<int> seen(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= n_classes) throw ValidationError("label " + std::to_string(y) + " out of range");
    seen[static_cast<std::size_t>(y)] = 1;
  }
  for (int c = 0; c < n_classes; ++c) {
    if (seen[static_cast<std::size_t>(c)] == 0) {
      throw ValidationError("class " + std::to_string(c) + " has no samples");
    }
  }
  if (!features.allFinite()) throw ValidationError("non-finite feature value");
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(rows[r]));
    out.labels.push_back(labels[rows[r]]);
  }
  out.n_classes = n_classes;
  out.class_names = class_names;
  out.name = name;
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());

  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    records.emplace_back(lineno, split_record(line, options.delimiter));
  }
  if (records.empty()) throw ValidationError(path.string() + " is empty");

  const std::size_t n_cols = records.front().second.size();
  if (n_cols < 2) throw ParseError(records.front().first, "need at least one feature and a label column");

  std::size_t label_col = 0;
  bool has_header = false;
  if (const auto* name = std::get_if<std::string>(&options.label_column)) {
    const auto& first = records.front().second;
    const auto it = std::find(first.begin(), first.end(), *name);
    if (it == first.end()) throw ValidationError("label column '" + *name + "' not in header");
    label_col = static_cast<std::size_t>(it - first.begin());
    has_header = true;
  } else {
    const int idx = std::get<int>(options.label_column);
    const long resolved = idx < 0 ? static_cast<long>(n_cols) + idx : idx;
    if (resolved < 0 || resolved >= static_cast<long>(n_cols)) {
      throw ValidationError("label column index " + std::to_string(idx) + " out of range");
    }
    label_col = static_cast<std::size_t>(resolved);
    const auto& first = records.front().second;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c != label_col && !parse_number(first[c])) has_header = true;
    }
  }

  const std::size_t begin = has_header ? 1 : 0;
  const std::size_t n_rows = records.size() - begin;
  Dataset ds;
  ds.name = path.stem().string();
  ds.features.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols - 1));
  ds.labels.reserve(n_rows);
  std::unordered_map<std::string, int> class_index;

  for (std::size_t r = begin; r < records.size(); ++r) {
    const auto& [lineno, cells] = records[r];
    if (cells.size() != n_cols) {
      throw ParseError(lineno, "expected " + std::to_string(n_cols) + " columns, got " +
                                   std::to_string(cells.size()));
    }
    Eigen::Index f = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c == label_col) continue;
      const auto v = parse_number(cells[c]);
      if (!v) throw ParseError(lineno, "non-numeric feature value '" + cells[c] + "' in column " + std::to_string(c));
      ds.features(static_cast<Eigen::Index>(r - begin), f++) = *v;
    }
    const std::string& label = cells[label_col];
    if (label.empty()) throw ParseError(lineno, "empty label");
    auto [it, inserted] = class_index.try_emplace(label, static_cast<int>(class_index.size()));
    if (inserted) ds.class_names.push_back(label);
    ds.labels.push_back(it->second);
  }
  ds.n_classes = static_cast<int>(class_index.size());
  if (ds.n_classes < 2) throw ValidationError(path.string() + ": single class");
  ds.validate();
  return ds;
}

Normalizer::Normalizer(std::vector<double> min, std::vector<double> max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) throw ValidationError("normalizer min/max sizes differ");
  for (std::size_t i = 0; i < min_.size(); ++i) {
    if (!(min_[i] <= max_[i])) throw ValidationError("normalizer min > max at feature " + std::to_string(i));
  }
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& train) {
  if (train.rows() == 0) throw ValidationError("cannot fit a normalizer on zero rows");
  std::vector<double> lo(static_cast<std::size_t>(train.cols()));
  std::vector<double> hi(lo.size());
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    lo[static_cast<std::size_t>(c)] = train.col(c).minCoeff();
    hi[static_cast<std::size_t>(c)] = train.col(c).maxCoeff();
  }
  return Normalizer(std::move(lo), std::move(hi));
}

std::vector<double> Normalizer::apply(std::span<const double> x) const {
  if (x.size() != min_.size()) throw ValidationError("normalizer expects " + std::to_string(min_.size()) + " features");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double range = max_[i] - min_[i];
    out[i] = range > 0.0 ? std::clamp((x[i] - min_[i]) / range, 0.0, 1.0) : 0.0;
  }
  return out;
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) != min_.size()) {
    throw ValidationError("normalizer expects " + std::to_string(min_.size()) + " features");
  }
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    const double range = max_[i] - min_[i];
    if (range > 0.0) {
      out.col(c) = ((x.col(c).array() - min_[i]) / range).cwiseMax(0.0).cwiseMin(1.0);
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

std::vector<std::size_t> Normalizer::constant_features() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < min_.size(); ++i) {
    if (min_[i] == max_[i]) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd one_hot(std::span<const int> labels, int n_classes) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), n_classes);
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (labels[m] < 0 || labels[m] >= n_classes) {
      throw ValidationError("label " + std::to_string(labels[m]) + " not in [0, " + std::to_string(n_classes) + ")");
    }
    y(static_cast<Eigen::Index>(m), labels[m]) = 1.0;
  }
  return y;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    if (assignment[m] != fold) rows.push_back(m);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    if (assignment[m] == fold) rows.push_back(m);
  }
  return rows;
}

FoldPlan make_folds(const Dataset& ds, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ValidationError("n_folds must be at least 2");
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.n_classes));
  for (std::size_t m = 0; m < ds.labels.size(); ++m) by_class[static_cast<std::size_t>(ds.labels[m])].push_back(m);

  FoldPlan plan{n_folds, std::vector<int>(ds.labels.size(), 0), seed};
  std::mt19937_64 rng(seed);
  int next = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    if (members.size() < static_cast<std::size_t>(n_folds)) {
      const std::string cname = c < ds.class_names.size() ? ds.class_names[c] : std::to_string(c);
      throw ValidationError("class '" + cname + "' has " + std::to_string(members.size()) +
                            " samples, fewer than " + std::to_string(n_folds) + " folds");
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t m : members) {
      plan.assignment[m] = next;
      next = (next + 1) % n_folds;
    }
  }
  return plan;
}

}  // namespace intrvfl
