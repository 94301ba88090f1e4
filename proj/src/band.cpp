#include "cohwalk/band.hpp"

#include <algorithm>
#include <cmath>

#include "cohwalk/kernels.hpp"
#include "cohwalk/walk.hpp"

namespace cohwalk {

namespace {

constexpr double kPointGapTol = 1e-9;  // per-k tolerance on sin(eps)
constexpr double kGridGapTol = 1e-6;   // min over a grid, for integrals

struct Trig {
  double c1, s1, c2, s2;
  explicit Trig(const CoinAngles& a)
      : c1(std::cos(a.theta1)), s1(std::sin(a.theta1)),
        c2(std::cos(a.theta2)), s2(std::sin(a.theta2)) {}
};

void check_grid(const KGrid& grid) {
  if (grid.count < 2 || grid.count % 2 != 0)
    throw std::invalid_argument("KGrid: count must be a positive even integer");
}

// Winding (and everything built on it) is undefined whenever the bands touch
// anywhere in the zone; use the exact continuum minimum.
void require_gapped(const CoinAngles& angles, const KGrid& grid) {
  check_grid(grid);
  if (band_gap_minimum(angles) <= kGridGapTol)
    throw GapClosedError("band: gap closed (near-critical angles)");
}

// Quadratures of bounded integrands only need the gap open at the sampled
// nodes; the half-cell offset keeps those away from the touching points.
void require_gapped_on_grid(const CoinAngles& angles, const KGrid& grid) {
  check_grid(grid);
  for (int j = 0; j < grid.count; ++j)
    if (band_gap(grid.node(j), angles) <= kGridGapTol)
      throw GapClosedError("band: gap closed at a grid node");
}

}  // namespace

double KGrid::node(int j) const {
  return -M_PI + (j + (offset ? 0.5 : 0.0)) * 2.0 * M_PI / count;
}

Eigen::Matrix2cd momentum_step_matrix(double k, const CoinAngles& angles) {
  Eigen::Matrix2cd t;
  const cd i{0.0, 1.0};
  t << std::exp(i * k), cd{0, 0}, cd{0, 0}, std::exp(-i * k);
  return t * coin_rx(angles.theta2) * t * coin_rx(angles.theta1);
}

double quasienergy(double k, const CoinAngles& angles) {
  const Trig t(angles);
  const double c = std::cos(2.0 * k) * t.c1 * t.c2 - t.s1 * t.s2;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double band_gap(double k, const CoinAngles& angles) {
  return std::sin(quasienergy(k, angles));
}

double band_gap_minimum(const CoinAngles& angles) {
  // |cos eps| is maximal where cos(2k) = +-1, so the continuum minimum of
  // sin(eps) sits at k = 0 or k = pi/2.
  return std::min(band_gap(0.0, angles), band_gap(M_PI / 2.0, angles));
}

Eigen::Vector3d bloch_vector(double k, const CoinAngles& angles) {
  const Trig t(angles);
  const double se = band_gap(k, angles);
  if (se <= kPointGapTol) throw GapClosedError("bloch_vector: sin(eps) below tolerance");
  const double c2k = std::cos(2.0 * k), s2k = std::sin(2.0 * k);
  return Eigen::Vector3d{c2k * t.s1 * t.c2 + t.c1 * t.s2,
                         -s2k * t.s1 * t.c2,
                         -s2k * t.c1 * t.c2} /
         se;
}

Eigen::Vector3d bloch_vector_derivative(double k, const CoinAngles& angles) {
  const Trig t(angles);
  const double eps = quasienergy(k, angles);
  const double se = std::sin(eps);
  if (se <= kPointGapTol) throw GapClosedError("bloch_vector_derivative: sin(eps) below tolerance");
  const double c2k = std::cos(2.0 * k), s2k = std::sin(2.0 * k);
  const Eigen::Vector3d v{c2k * t.s1 * t.c2 + t.c1 * t.s2, -s2k * t.s1 * t.c2, -s2k * t.c1 * t.c2};
  const Eigen::Vector3d dv{-2.0 * s2k * t.s1 * t.c2, -2.0 * c2k * t.s1 * t.c2, -2.0 * c2k * t.c1 * t.c2};
  const double deps = 2.0 * s2k * t.c1 * t.c2 / se;
  return dv / se - v * (std::cos(eps) * deps / (se * se));
}

double group_velocity(double k, const CoinAngles& angles) {
  const Trig t(angles);
  const double se = band_gap(k, angles);
  if (se <= kPointGapTol) throw GapClosedError("group_velocity: sin(eps) below tolerance");
  return 2.0 * std::sin(2.0 * k) * t.c1 * t.c2 / se;
}

double chiral_curvature(double k, const CoinAngles& angles) {
  const Eigen::Vector3d n = bloch_vector(k, angles);
  const Eigen::Vector3d dn = bloch_vector_derivative(k, angles);
  return n.cross(dn).dot(chiral_axis(angles.theta1));
}

int winding_number(const CoinAngles& angles, const KGrid& grid) {
  require_gapped(angles, grid);
  const Trig t(angles);
  // In-plane components of n sin(eps) in the right-handed basis
  // e1 = (1,0,0), e2 = A x e1 = (0,-s1,-c1); the common 1/sin(eps) factor
  // drops out of the angle.
  auto angle_at = [&](double k) {
    const double u = std::cos(2.0 * k) * t.s1 * t.c2 + t.c1 * t.s2;
    const double w = std::sin(2.0 * k) * t.c2;
    return std::atan2(w, u);
  };
  double total = 0.0;
  double prev = angle_at(grid.node(0));
  for (int j = 1; j <= grid.count; ++j) {
    const double cur = angle_at(grid.node(j % grid.count));
    double d = cur - prev;
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    total += d;
    prev = cur;
  }
  const double turns = total / (2.0 * M_PI);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-3)
    throw std::runtime_error("winding_number: accumulated angle is not an integer number of turns");
  return static_cast<int>(rounded);
}

double winding_integral(const CoinAngles& angles, const KGrid& grid) {
  require_gapped(angles, grid);
  return kernels::bz_mean(grid.count, grid.offset,
                          [&](double k) { return chiral_curvature(k, angles); });
}

double ballistic_coefficient(const CoinAngles& angles, const KGrid& grid) {
  require_gapped_on_grid(angles, grid);
  return kernels::bz_mean(grid.count, grid.offset, [&](double k) {
    const double v = group_velocity(k, angles);
    return v * v;
  });
}

double s_gamma(int steps, const CoinAngles& angles, const KGrid& grid) {
  const int gamma = winding_number(angles, grid);
  const double osc = kernels::bz_mean(grid.count, grid.offset, [&](double k) {
    return std::cos(2.0 * steps * quasienergy(k, angles)) * chiral_curvature(k, angles);
  });
  return 0.5 * gamma - 0.5 * osc;
}

double m1_asymptotic(int steps, const CoinAngles& angles, int sign, const KGrid& grid) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("m1_asymptotic: sign must be +1 or -1");
  return sign * s_gamma(steps, angles, grid);
}

}  // namespace cohwalk
