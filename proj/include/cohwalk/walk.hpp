#ifndef COHWALK_WALK_HPP
#define COHWALK_WALK_HPP

#include <Eigen/Dense>

#include "cohwalk/types.hpp"

// Split-step quantum walk on the integer line: each step applies
//   T R_x(2 theta2) T R_x(2 theta1)          (rightmost factor first)
// with the spin-dependent translation T moving |up> one site right and
// |down> one site left. With a nonzero twist phi an R_z(2 phi) follows each
// translation. All evolution is exact state-vector arithmetic; there is no
// sampling anywhere.

namespace cohwalk {

/// R_x(2 theta) = exp(-i theta sigma_x).
Eigen::Matrix2cd coin_rx(double theta);

/// R_z(2 phi) = exp(-i phi sigma_z) = diag(e^{-i phi}, e^{+i phi}).
Eigen::Matrix2cd coin_rz(double phi);

/// Spin-dependent translation; support grows by one site on each side.
WalkState apply_translation(const WalkState& state);

/// Pointwise 2x2 coin application.
WalkState apply_coin(const WalkState& state, const Eigen::Matrix2cd& coin);

/// One full split step (two coins, two translations, optional twists).
WalkState step(const WalkState& state, const WalkSpec& spec);

/// |m> (x) |spin> evolved for spec.steps steps.
WalkState evolve(const WalkSpec& spec);

/// P(x) = |A_{x,up}|^2 + |A_{x,down}|^2 over the support window.
PositionDistribution distribution(const WalkState& state);

/// M_j = sum_x x^j P(x).
double moment(const PositionDistribution& dist, int j);

/// Chiral axis A = (0, cos theta1, -sin theta1).
Eigen::Vector3d chiral_axis(double theta1);

/// Unit eigenvector of (A . sigma) with eigenvalue `sign` (+1 or -1),
/// phase-fixed so the down component is real and nonnegative (up component
/// real positive when the down component vanishes).
Spinor chiral_spinor(double theta1, int sign);

}  // namespace cohwalk

#endif
