#include "intrvfl/model.hpp"

#include "intrvfl/error.hpp"

#include <charconv>
#include <fstream>

namespace intrvfl {
namespace {

constexpr std::string_view kFormat = "intrvfl-model";
constexpr int kFormatVersion = 1;

}  // namespace

std::string_view to_string(ModelFamily family) noexcept {
  return family == ModelFamily::rvfl ? "rvfl" : "intrvfl";
}

ModelFamily parse_family(std::string_view text) {
  if (text == "rvfl") return ModelFamily::rvfl;
  if (text == "intrvfl") return ModelFamily::intrvfl;
  throw ConfigError("family", "expected rvfl or intrvfl, got '" + std::string(text) + "'");
}

ReadoutMode ReadoutMode::parse(std::string_view text) {
  if (text == "real") return {};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("readout", "expected real, quantized:B, ga:B or ga-from-quantized:B, got '" + std::string(text) + "'");
  }
  const auto kind = text.substr(0, colon);
  const auto bound = text.substr(colon + 1);
  ReadoutMode mode;
  if (kind == "quantized") {
    mode.kind = ReadoutKind::quantized;
  } else if (kind == "ga") {
    mode.kind = ReadoutKind::ga;
  } else if (kind == "ga-from-quantized") {
    mode.kind = ReadoutKind::ga_from_quantized;
  } else {
    throw ConfigError("readout", "unknown readout kind '" + std::string(kind) + "'");
  }
  const auto [ptr, ec] = std::from_chars(bound.data(), bound.data() + bound.size(), mode.boundary);
  if (ec != std::errc{} || ptr != bound.data() + bound.size() || mode.boundary < 1 || mode.boundary > kMaxBoundary) {
    throw ConfigError("readout", "boundary must be an integer in [1, 127], got '" + std::string(bound) + "'");
  }
  return mode;
}

std::string ReadoutMode::str() const {
  switch (kind) {
    case ReadoutKind::real: return "real";
    case ReadoutKind::quantized: return "quantized:" + std::to_string(boundary);
    case ReadoutKind::ga: return "ga:" + std::to_string(boundary);
    case ReadoutKind::ga_from_quantized: return "ga-from-quantized:" + std::to_string(boundary);
  }
  return "real";
}

void ModelSpec::validate() const {
  if (n_hidden < 1) throw ConfigError("n_hidden", "must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda", "must be finite and > 0");
  if (family == ModelFamily::intrvfl && (kappa < 1 || kappa > kMaxKappa)) {
    throw ConfigError("kappa", "must be in [1, 127]");
  }
  if (readout.integer()) {
    if (family != ModelFamily::intrvfl) throw ConfigError("readout", "integer readouts require the intrvfl family");
    if (readout.boundary < 1 || readout.boundary > kMaxBoundary) throw ConfigError("readout", "boundary must be in [1, 127]");
    plan_accumulator(n_hidden, kappa, readout.boundary);
  }
}

HiddenLayer make_hidden_layer(const ModelSpec& spec, std::size_t n_features, std::uint64_t seed) {
  if (spec.family == ModelFamily::intrvfl) {
    return IntHiddenLayer{BipolarProjection::generate(spec.n_hidden, n_features, seed), spec.kappa};
  }
  return SigmoidHiddenLayer{generate_real(spec.n_hidden, n_features, seed)};
}

int Model::predict(std::span<const double> x) const {
  const auto normalized = normalizer.apply(x);
  if (const auto* int_layer = std::get_if<IntHiddenLayer>(&layer)) {
    const HiddenState h = (*int_layer)(normalized);
    if (const auto* q = std::get_if<IntReadout>(&readout)) return forward_int(h, *q).label;
    Eigen::VectorXd hv(static_cast<Eigen::Index>(h.size()));
    for (std::size_t n = 0; n < h.size(); ++n) hv(static_cast<Eigen::Index>(n)) = h.values[n];
    return readout_scores(hv, std::get<RealReadout>(readout).weights).label;
  }
  const auto& sig = std::get<SigmoidHiddenLayer>(layer);
  return forward_real(normalized, sig.projection, std::get<RealReadout>(readout)).label;
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  std::vector<double> row(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index m = 0; m < scores.rows(); ++m) {
    for (Eigen::Index l = 0; l < scores.cols(); ++l) row[static_cast<std::size_t>(l)] = scores(m, l);
    out[static_cast<std::size_t>(m)] = argmax<double>(row);
  }
  return out;
}

std::vector<int> Model::predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd normalized = normalizer.apply(x);
  if (const auto* sig = std::get_if<SigmoidHiddenLayer>(&layer)) {
    return argmax_rows(hidden_sigmoid(normalized, sig->projection) * std::get<RealReadout>(readout).weights.transpose());
  }
  const auto& int_layer = std::get<IntHiddenLayer>(layer);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  Eigen::MatrixXd hidden(x.rows(), static_cast<Eigen::Index>(int_layer.n_hidden()));
  for (Eigen::Index m = 0; m < x.rows(); ++m) {
    for (Eigen::Index i = 0; i < x.cols(); ++i) row[static_cast<std::size_t>(i)] = normalized(m, i);
    const HiddenState h = int_layer(row);
    if (const auto* q = std::get_if<IntReadout>(&readout)) {
      out[static_cast<std::size_t>(m)] = forward_int(h, *q).label;
    } else {
      for (std::size_t n = 0; n < h.size(); ++n) hidden(m, static_cast<Eigen::Index>(n)) = h.values[n];
    }
  }
  if (std::holds_alternative<RealReadout>(readout)) {
    return argmax_rows(hidden * std::get<RealReadout>(readout).weights.transpose());
  }
  return out;
}

double Model::accuracy(const Dataset& ds) const {
  if (ds.n_samples() == 0) return 0.0;
  const auto predicted = predict(ds.features);
  std::size_t correct = 0;
  for (std::size_t m = 0; m < predicted.size(); ++m) correct += predicted[m] == ds.labels[m] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

IntHiddenSet collect_int_hidden(const IntHiddenLayer& layer, const Eigen::MatrixXd& normalized,
                                std::span<const int> labels, int n_classes) {
  IntHiddenSet set;
  set.n_hidden = layer.n_hidden();
  set.kappa = layer.kappa;
  set.n_classes = n_classes;
  set.labels.assign(labels.begin(), labels.end());
  set.values.resize(static_cast<std::size_t>(normalized.rows()) * set.n_hidden);
  std::vector<double> row(static_cast<std::size_t>(normalized.cols()));
  for (Eigen::Index m = 0; m < normalized.rows(); ++m) {
    for (Eigen::Index i = 0; i < normalized.cols(); ++i) row[static_cast<std::size_t>(i)] = normalized(m, i);
    const HiddenState h = layer(row);
    std::copy(h.values.begin(), h.values.end(), set.values.begin() + m * static_cast<Eigen::Index>(set.n_hidden));
  }
  return set;
}

Readout make_readout(const ModelSpec& spec, const RealReadout& ridge, const IntHiddenSet* train_hidden,
                     const GaConfig& ga, std::size_t jobs) {
  const ReadoutMode& mode = spec.readout;
  switch (mode.kind) {
    case ReadoutKind::real: return ridge;
    case ReadoutKind::quantized: return quantize_readout(ridge, mode.boundary);
    case ReadoutKind::ga:
    case ReadoutKind::ga_from_quantized: {
      if (train_hidden == nullptr) throw ConfigError("readout", "GA readouts need integer hidden states");
      std::optional<IntReadout> init;
      if (mode.kind == ReadoutKind::ga_from_quantized) init = quantize_readout(ridge, mode.boundary);
      return ga_refine(init, *train_hidden, mode.boundary, ga, jobs).readout;
    }
  }
  return ridge;
}

Model train_model(const ModelSpec& spec, const Dataset& train, std::uint64_t seed, const GaConfig& ga,
                  std::size_t jobs) {
  spec.validate();
  if (spec.readout.uses_ga()) ga.validate();
  if (train.n_samples() == 0) throw ValidationError("empty training set");

  Model model;
  model.spec = spec;
  model.n_features = train.n_features();
  model.n_classes = train.n_classes;
  model.seed = seed;
  model.class_names = train.class_names;
  model.normalizer = Normalizer::fit(train.features);
  model.layer = make_hidden_layer(spec, model.n_features, seed);

  const Eigen::MatrixXd normalized = model.normalizer.apply(train.features);
  const Eigen::MatrixXd targets = one_hot(train.labels, train.n_classes);

  if (const auto* int_layer = std::get_if<IntHiddenLayer>(&model.layer)) {
    const IntHiddenSet hidden = collect_int_hidden(*int_layer, normalized, train.labels, train.n_classes);
    Eigen::MatrixXd h(static_cast<Eigen::Index>(hidden.n_samples()), static_cast<Eigen::Index>(hidden.n_hidden));
    for (Eigen::Index m = 0; m < h.rows(); ++m) {
      for (Eigen::Index n = 0; n < h.cols(); ++n) {
        h(m, n) = hidden.values[static_cast<std::size_t>(m) * hidden.n_hidden + static_cast<std::size_t>(n)];
      }
    }
    const RealReadout ridge = RidgeSystem(h, targets).solve(spec.lambda);
    model.readout = make_readout(spec, ridge, &hidden, ga, jobs);
  } else {
    const HiddenMatrix hidden = collect_hidden(model.layer, normalized);
    model.readout = make_readout(spec, solve_ridge(hidden, targets, spec.lambda), nullptr, ga, jobs);
  }
  return model;
}

nlohmann::json model_to_json(const Model& model) {
  using nlohmann::json;
  json j;
  j["format"] = kFormat;
  j["version"] = kFormatVersion;
  j["family"] = to_string(model.spec.family);
  j["n_hidden"] = model.spec.n_hidden;
  j["n_features"] = model.n_features;
  j["n_classes"] = model.n_classes;
  j["lambda"] = model.spec.lambda;
  if (model.spec.family == ModelFamily::intrvfl) j["kappa"] = model.spec.kappa;
  j["seed"] = model.seed;
  j["readout_mode"] = model.spec.readout.str();
  j["class_names"] = model.class_names;
  j["normalizer"] = {{"min", model.normalizer.min()}, {"max", model.normalizer.max()}};

  json readout;
  if (const auto* r = std::get_if<RealReadout>(&model.readout)) {
    readout["kind"] = "real";
    json rows = json::array();
    for (Eigen::Index l = 0; l < r->weights.rows(); ++l) {
      std::vector<double> row(static_cast<std::size_t>(r->weights.cols()));
      for (Eigen::Index n = 0; n < r->weights.cols(); ++n) row[static_cast<std::size_t>(n)] = r->weights(l, n);
      rows.push_back(row);
    }
    readout["weights"] = std::move(rows);
  } else {
    const auto& q = std::get<IntReadout>(model.readout);
    readout["kind"] = "integer";
    readout["boundary"] = q.boundary;
    readout["levels"] = q.levels();
    readout["bits_per_weight"] = q.bits_per_weight();
    readout["scale"] = q.scale;
    json rows = json::array();
    for (std::size_t l = 0; l < q.n_out; ++l) {
      std::vector<int> row(q.n_hidden);
      for (std::size_t n = 0; n < q.n_hidden; ++n) row[n] = q.at(l, n);
      rows.push_back(row);
    }
    readout["weights"] = std::move(rows);
  }
  j["readout"] = std::move(readout);
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) throw ValidationError("not an intrvfl model file");
    if (j.at("version").get<int>() != kFormatVersion) throw ValidationError("unsupported model file version");
    Model model;
    model.spec.family = parse_family(j.at("family").get<std::string>());
    model.spec.n_hidden = j.at("n_hidden").get<std::size_t>();
    model.spec.lambda = j.at("lambda").get<double>();
    if (model.spec.family == ModelFamily::intrvfl) model.spec.kappa = j.at("kappa").get<int>();
    model.spec.readout = ReadoutMode::parse(j.at("readout_mode").get<std::string>());
    model.spec.validate();
    model.n_features = j.at("n_features").get<std::size_t>();
    model.n_classes = j.at("n_classes").get<int>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    model.normalizer = Normalizer(j.at("normalizer").at("min").get<std::vector<double>>(),
                                  j.at("normalizer").at("max").get<std::vector<double>>());
    if (model.normalizer.n_features() != model.n_features) throw ValidationError("normalizer width mismatch");
    model.layer = make_hidden_layer(model.spec, model.n_features, model.seed);

    const auto& r = j.at("readout");
    const auto n_out = static_cast<std::size_t>(model.n_classes);
    const auto& rows = r.at("weights");
    if (rows.size() != n_out) throw ValidationError("readout row count mismatch");
    if (r.at("kind").get<std::string>() == "real") {
      RealReadout real{Eigen::MatrixXd(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(model.spec.n_hidden)),
                       model.spec.lambda};
      for (std::size_t l = 0; l < n_out; ++l) {
        const auto row = rows[l].get<std::vector<double>>();
        if (row.size() != model.spec.n_hidden) throw ValidationError("readout row width mismatch");
        for (std::size_t n = 0; n < row.size(); ++n) real.weights(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n)) = row[n];
      }
      model.readout = std::move(real);
    } else {
      IntReadout q;
      q.n_out = n_out;
      q.n_hidden = model.spec.n_hidden;
      q.boundary = r.at("boundary").get<int>();
      q.scale = r.at("scale").get<double>();
      q.weights.reserve(n_out * q.n_hidden);
      for (std::size_t l = 0; l < n_out; ++l) {
        const auto row = rows[l].get<std::vector<int>>();
        if (row.size() != q.n_hidden) throw ValidationError("readout row width mismatch");
        for (int w : row) {
          if (w < -q.boundary || w > q.boundary) throw ValidationError("integer weight outside the boundary");
          q.weights.push_back(static_cast<std::int8_t>(w));
        }
      }
      model.readout = std::move(q);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << model_to_json(model).dump(2) << '\n';
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace intrvfl
