#include "cgambit/rng.hpp"

#include <cmath>
#include <numbers>

#include "cgambit/error.hpp"

namespace cgambit {

int RngStream::uniform_index(int n) {
  if (n <= 0) throw Error("uniform_index: n must be positive");
  int k = static_cast<int>(uniform01() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

int RngStream::categorical(std::span<const double> probs) {
  if (probs.empty()) throw Error("categorical: empty probability vector");
  const double u = uniform01();
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  // u landed past the accumulated mass (row sums to 1 only within
  // tolerance); fall back to the last state with positive probability.
  if (last_positive < 0) throw Error("categorical: all-zero probability vector");
  return last_positive;
}

double RngStream::normal01() {
  const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw Error("gamma: shape must be positive");
  if (shape < 1.0) {
    const double u = 1.0 - uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal01();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> RngStream::dirichlet(std::span<const double> alpha) {
  std::vector<double> draw(alpha.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    draw[i] = gamma(alpha[i]);
    sum += draw[i];
  }
  if (sum <= 0.0) {
    // All gammas underflowed; degrade to uniform rather than divide by 0.
    const double p = 1.0 / static_cast<double>(alpha.size());
    for (auto& d : draw) d = p;
    return draw;
  }
  for (auto& d : draw) d /= sum;
  return draw;
}

}  // namespace cgambit
