#include "cohwalk/walk.hpp"

#include <cmath>

namespace cohwalk {

namespace {

const cd kI{0.0, 1.0};

void check_spec(const WalkSpec& spec) {
  if (!(std::isfinite(spec.angles.theta1) && std::isfinite(spec.angles.theta2)))
    throw std::invalid_argument("walk: coin angles must be finite");
  if (spec.angles.theta1 < 0.0 || spec.angles.theta1 > M_PI ||
      spec.angles.theta2 < 0.0 || spec.angles.theta2 > M_PI)
    throw std::invalid_argument("walk: coin angles must lie in [0, pi]");
  if (!std::isfinite(spec.phi)) throw std::invalid_argument("walk: phi must be finite");
  if (spec.steps < 0) throw std::invalid_argument("walk: steps must be nonnegative");
  if (std::abs(spec.initial_spin.norm_sq() - 1.0) > 1e-12)
    throw std::invalid_argument("walk: initial spin must have unit norm");
}

}  // namespace

Eigen::Matrix2cd coin_rx(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2cd m;
  m << cd{c, 0.0}, -kI * s, -kI * s, cd{c, 0.0};
  return m;
}

Eigen::Matrix2cd coin_rz(double phi) {
  Eigen::Matrix2cd m;
  m << std::exp(-kI * phi), cd{0.0, 0.0}, cd{0.0, 0.0}, std::exp(kI * phi);
  return m;
}

WalkState apply_translation(const WalkState& state) {
  const std::size_t n = state.amps.size();
  WalkState out;
  out.min_position = state.min_position - 1;
  out.amps.assign(n + 2, Spinor{});
  for (std::size_t i = 0; i < n; ++i) {
    out.amps[i + 2].up = state.amps[i].up;    // x -> x + 1
    out.amps[i].down = state.amps[i].down;    // x -> x - 1
  }
  return out;
}

WalkState apply_coin(const WalkState& state, const Eigen::Matrix2cd& coin) {
  WalkState out = state;
  for (auto& a : out.amps) {
    const cd u = a.up, d = a.down;
    a.up = coin(0, 0) * u + coin(0, 1) * d;
    a.down = coin(1, 0) * u + coin(1, 1) * d;
  }
  return out;
}

namespace {

void twist_in_place(WalkState& s, const Eigen::Matrix2cd& rz) {
  for (auto& a : s.amps) {
    a.up *= rz(0, 0);
    a.down *= rz(1, 1);
  }
}

}  // namespace

WalkState step(const WalkState& state, const WalkSpec& spec) {
  const bool twisted = spec.phi != 0.0;
  const Eigen::Matrix2cd rz = coin_rz(spec.phi);
  WalkState s = apply_translation(apply_coin(state, coin_rx(spec.angles.theta1)));
  if (twisted) twist_in_place(s, rz);
  s = apply_translation(apply_coin(s, coin_rx(spec.angles.theta2)));
  if (twisted) twist_in_place(s, rz);
  return s;
}

WalkState evolve(const WalkSpec& spec) {
  check_spec(spec);
  WalkState s;
  s.min_position = spec.initial_position;
  s.amps = {spec.initial_spin};
  for (int n = 0; n < spec.steps; ++n) s = step(s, spec);
  return s;
}

PositionDistribution distribution(const WalkState& state) {
  PositionDistribution dist;
  for (std::size_t i = 0; i < state.amps.size(); ++i)
    dist[state.min_position + static_cast<int>(i)] = state.amps[i].norm_sq();
  return dist;
}

double moment(const PositionDistribution& dist, int j) {
  if (j < 0) throw std::invalid_argument("moment: order must be nonnegative");
  double m = 0.0;
  for (const auto& [x, p] : dist) {
    double xj = 1.0;
    for (int i = 0; i < j; ++i) xj *= static_cast<double>(x);
    m += xj * p;
  }
  return m;
}

Eigen::Vector3d chiral_axis(double theta1) {
  if (!std::isfinite(theta1)) throw std::invalid_argument("chiral_axis: theta1 must be finite");
  return {0.0, std::cos(theta1), -std::sin(theta1)};
}

Spinor chiral_spinor(double theta1, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("chiral_spinor: sign must be +1 or -1");
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double lambda = static_cast<double>(sign);
  // Two algebraic eigenvector forms of A.sigma = [[-s1, -i c1], [i c1, s1]];
  // at least one is nondegenerate for every theta1.
  const Eigen::Vector2cd va{-kI * c1, cd{s1 + lambda, 0.0}};
  const Eigen::Vector2cd vb{cd{lambda - s1, 0.0}, kI * c1};
  Eigen::Vector2cd v = (va.norm() >= vb.norm()) ? va : vb;
  v.normalize();
  if (std::abs(v(1)) > 1e-12)
    v *= std::conj(v(1)) / std::abs(v(1));
  else
    v *= std::conj(v(0)) / std::abs(v(0));
  return Spinor{v(0), v(1)};
}

}  // namespace cohwalk
