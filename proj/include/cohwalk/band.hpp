#ifndef COHWALK_BAND_HPP
#define COHWALK_BAND_HPP

#include <Eigen/Dense>

#include "cohwalk/types.hpp"

// Momentum-space analysis of the one-step unitary. The quasienergy and Bloch
// vector are derived in closed form from the step matrix
//   U(k) = e^{i k sigma_z} R_x(2 theta2) e^{i k sigma_z} R_x(2 theta1)
//        = cos(eps) I - i sin(eps) n(k).sigma,
// which gives
//   cos eps(k) = cos(2k) cos t1 cos t2 - sin t1 sin t2
//   n(k) sin eps = (cos2k s1 c2 + c1 s2, -sin2k s1 c2, -sin2k c1 c2).
// n(k) is a unit vector in the plane orthogonal to the chiral axis A, and
// its winding around A over the Brillouin zone is the topological invariant.

namespace cohwalk {

/// Brillouin-zone grid k_j = -pi + (j + 1/2) 2pi/count (half-cell offset keeps
/// samples away from the 0/0-prone points k = 0, +-pi/2 near criticality).
struct KGrid {
  int count = 2048;
  bool offset = true;

  double node(int j) const;
};

/// Quasienergy eps(k), Bloch vector n(k) and the chiral axis at one momentum.
struct BlochData {
  double k = 0.0;
  double epsilon = 0.0;
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
};

/// One-step unitary in the momentum representation.
Eigen::Matrix2cd momentum_step_matrix(double k, const CoinAngles& angles);

/// Eigenphase of the step matrix in [0, pi]; the argument of arccos is
/// clamped to [-1, 1] against roundoff at band extrema.
double quasienergy(double k, const CoinAngles& angles);

/// sin(eps(k)); the common denominator of all Bloch components. Values at or
/// below 1e-9 mean the gap is closed at this k.
double band_gap(double k, const CoinAngles& angles);

/// min_k sin(eps(k)) over the whole zone, evaluated at the band extrema
/// cos(2k) = +-1 where the minimum is attained.
double band_gap_minimum(const CoinAngles& angles);

/// Unit Bloch vector n(k). Throws GapClosedError when sin(eps) <= 1e-9.
Eigen::Vector3d bloch_vector(double k, const CoinAngles& angles);

/// Analytic dn/dk (quotient rule on the closed-form components).
Eigen::Vector3d bloch_vector_derivative(double k, const CoinAngles& angles);

/// Group velocity d eps/dk = 2 sin(2k) cos t1 cos t2 / sin eps.
double group_velocity(double k, const CoinAngles& angles);

/// (n x dn/dk) . A at one momentum; the winding-density integrand.
double chiral_curvature(double k, const CoinAngles& angles);

/// Integer winding of n(k) around A over k in [-pi, pi), extracted by
/// accumulated-angle counting. Throws GapClosedError when min_k sin(eps) on
/// the grid is <= 1e-6; throws std::runtime_error if the accumulated angle is
/// farther than 1e-3 from an integer multiple of 2pi.
int winding_number(const CoinAngles& angles, const KGrid& grid);

/// Quadrature of the winding density (1/2pi) Int (n x dn/dk).A dk. Retained
/// as a cross-check of winding_number; not integer-guaranteed.
double winding_integral(const CoinAngles& angles, const KGrid& grid);

/// L = (1/2pi) Int V(k)^2 dk; the ballistic coefficient M2(N)/N^2 tends to.
double ballistic_coefficient(const CoinAngles& angles, const KGrid& grid);

/// S_Gamma(N) = gamma/2 - (1/2) (1/2pi) Int cos(2 N eps) (n x dn/dk).A dk.
double s_gamma(int steps, const CoinAngles& angles, const KGrid& grid);

/// Closed-form first-moment prediction for a chiral-eigenstate coin:
/// sign * S_Gamma(N), where `sign` is the (A.sigma) eigenvalue of the coin.
double m1_asymptotic(int steps, const CoinAngles& angles, int sign, const KGrid& grid);

}  // namespace cohwalk

#endif
