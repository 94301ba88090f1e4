#include "cohwalk/kernels.hpp"

#include <atomic>
#include <cmath>
#include <functional>

namespace cohwalk::kernels {

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

namespace {

inline cd row_dot(const cd* row, const cd* x, Eigen::Index n) {
  cd acc{0.0, 0.0};
  for (Eigen::Index j = 0; j < n; ++j) acc += row[j] * x[j];
  return acc;
}

}  // namespace

void matvec(const CMatrix& a, const CVector& x, CVector& y, Exec exec) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  y.resize(rows);
  const cd* xp = x.data();
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < rows; ++i) y[i] = row_dot(a.data() + i * cols, xp, cols);
  } else {
    for (Eigen::Index i = 0; i < rows; ++i) y[i] = row_dot(a.data() + i * cols, xp, cols);
  }
}

namespace {

inline double gram_row(const std::vector<double>& x, const std::vector<cd>& a,
                       double half_a2, bool weight_xy, std::size_t i) {
  const std::size_t n = x.size();
  cd acc{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double d = x[i] - x[j];
    double g = std::exp(-d * d * half_a2);
    if (weight_xy) g *= x[i] * x[j];
    acc += a[j] * g;
  }
  return (std::conj(a[i]) * acc).real();
}

}  // namespace

double gram_bilinear(const std::vector<double>& x, const std::vector<cd>& a,
                     double alpha, bool weight_xy, Exec exec) {
  const std::size_t n = x.size();
  const double half_a2 = 0.5 * alpha * alpha;
  std::vector<double> partial(n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      partial[static_cast<std::size_t>(i)] =
          gram_row(x, a, half_a2, weight_xy, static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) partial[i] = gram_row(x, a, half_a2, weight_xy, i);
  }
  double sum = 0.0;
  for (double v : partial) sum += v;
  return sum;
}

double bz_mean(int count, bool offset, const std::function<double(double)>& f, Exec exec) {
  const double shift = offset ? 0.5 : 0.0;
  const double step = 2.0 * M_PI / count;
  std::vector<double> samples(static_cast<std::size_t>(count));
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < count; ++j) samples[static_cast<std::size_t>(j)] = f(-M_PI + (j + shift) * step);
  } else {
    for (int j = 0; j < count; ++j) samples[static_cast<std::size_t>(j)] = f(-M_PI + (j + shift) * step);
  }
  double sum = 0.0;
  for (double v : samples) sum += v;
  return sum / count;
}

}  // namespace cohwalk::kernels
