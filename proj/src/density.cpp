#include "intrvfl/density.hpp"

#include "intrvfl/error.hpp"

#include <cmath>
#include <string>

namespace intrvfl {

Level quantize(double x, std::size_t n_dim) {
  if (n_dim < 1) throw ValidationError("quantize: dimensionality must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ValidationError("quantize: value " + std::to_string(x) + " outside [0, 1]; clip upstream");
  }
  return static_cast<Level>(std::round(x * static_cast<double>(n_dim)));
}

DensityCode::DensityCode(Level level, std::size_t n_dim) : n_dim_(n_dim), level_(level) {
  if (level < 0 || static_cast<std::size_t>(level) > n_dim) {
    throw ValidationError("density code level " + std::to_string(level) + " not in [0, " +
                          std::to_string(n_dim) + "]");
  }
}

std::vector<std::int8_t> DensityCode::materialize() const {
  std::vector<std::int8_t> out(n_dim_);
  for (std::size_t i = 0; i < n_dim_; ++i) out[i] = (*this)[i];
  return out;
}

DensityCode encode(Level level, std::size_t n_dim) { return DensityCode(level, n_dim); }

std::vector<Level> encode_features(std::span<const double> x, std::size_t n_dim) {
  std::vector<Level> levels(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) levels[i] = quantize(x[i], n_dim);
  return levels;
}

}  // namespace intrvfl
