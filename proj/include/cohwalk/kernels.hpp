#ifndef COHWALK_KERNELS_HPP
#define COHWALK_KERNELS_HPP

#include <Eigen/Dense>
#include <functional>

#include "cohwalk/types.hpp"

// Data-parallel inner kernels. Every kernel has a serial reference path and
// an OpenMP path; both produce bitwise-identical results because parallelism
// is only over independent output elements (reductions stay serial).

namespace cohwalk::kernels {

enum class Exec { Serial, Parallel };

/// Process-wide default used by kernels when no Exec is passed explicitly.
Exec default_exec();
void set_default_exec(Exec e);

using CMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;

/// Dense complex matrix-vector product y = A x (row-major A).
void matvec(const CMatrix& a, const CVector& x, CVector& y, Exec exec);
inline void matvec(const CMatrix& a, const CVector& x, CVector& y) {
  matvec(a, x, y, default_exec());
}

/// Real part of sum_{i,j} conj(a_i) a_j w_i w_j exp(-(x_i-x_j)^2 alpha^2 / 2),
/// with w = x (weight_xy) or w = 1. The Gaussian row sums are evaluated per i
/// and reduced serially.
double gram_bilinear(const std::vector<double>& x, const std::vector<cd>& a,
                     double alpha, bool weight_xy, Exec exec);
inline double gram_bilinear(const std::vector<double>& x, const std::vector<cd>& a,
                            double alpha, bool weight_xy) {
  return gram_bilinear(x, a, alpha, weight_xy, default_exec());
}

/// Mean of f over the Brillouin-zone grid k_j = -pi + (j + offset/2) 2pi/count,
/// i.e. the midpoint-rule value of (1/2pi) Int f dk. Samples are stored per
/// index and summed serially so the result is thread-count independent.
double bz_mean(int count, bool offset, const std::function<double(double)>& f, Exec exec);
inline double bz_mean(int count, bool offset, const std::function<double(double)>& f) {
  return bz_mean(count, offset, f, default_exec());
}

}  // namespace cohwalk::kernels

#endif
