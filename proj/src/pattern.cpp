#include "lpf/pattern.hpp"

#include <cmath>
#include <stdexcept>

#include "lpf/rng.hpp"

namespace lpf {

Pattern grid_pattern(int grid_n, double r) {
  if (grid_n < 2) throw std::invalid_argument("grid_pattern: grid_n must be >= 2");
  if (r <= 0.0) throw std::invalid_argument("grid_pattern: radius must be positive");
  Pattern pattern;
  pattern.radius = r;
  double step = 2.0 * r / grid_n;
  pattern.tau_s = step;
  // keep strictly interior nodes: (i*step)^2 + (j*step)^2 < r^2 reduces to
  // the exact integer test 4(i^2+j^2) < n^2, making the count independent of r
  int half = (grid_n + 1) / 2;
  long long limit = static_cast<long long>(grid_n) * grid_n;
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      long long q = 4 * (static_cast<long long>(i) * i + static_cast<long long>(j) * j);
      if (q < limit) pattern.offsets.emplace_back(i * step, j * step, 0.0);
    }
  }
  return pattern;
}

Pattern random_pattern(int m, double r, std::uint64_t rng_seed) {
  if (m <= 0) throw std::invalid_argument("random_pattern: m must be positive");
  if (r <= 0.0) throw std::invalid_argument("random_pattern: radius must be positive");
  Pattern pattern;
  pattern.radius = r;
  pattern.tau_s = spacing_for(r, m);
  auto rng = make_rng(rng_seed, RngStream::kPattern);
  pattern.offsets.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pattern.offsets.push_back(random_in_disk(rng, r));
  return pattern;
}

double spacing_for(double r, int m) {
  if (r <= 0.0 || m <= 0) throw std::invalid_argument("spacing_for: need r > 0 and m > 0");
  return r / std::sqrt(static_cast<double>(m));
}

} // namespace lpf
