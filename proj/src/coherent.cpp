#include "cohwalk/coherent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "cohwalk/kernels.hpp"
#include "cohwalk/walk.hpp"

namespace cohwalk {

namespace {

const cd kI{0.0, 1.0};

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("coherent: alpha must be a positive real");
}

/// Positions and per-spin amplitude vectors, optionally twisted by e^{-i x phi}.
struct SpinSectors {
  std::vector<double> x;
  std::vector<cd> up, down;
};

SpinSectors sectors(const WalkState& s, double phi = 0.0) {
  SpinSectors sec;
  const std::size_t n = s.amps.size();
  sec.x.resize(n);
  sec.up.resize(n);
  sec.down.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.min_position + static_cast<double>(i);
    const cd tw = (phi == 0.0) ? cd{1.0, 0.0} : std::exp(-kI * (x * phi));
    sec.x[i] = x;
    sec.up[i] = tw * s.amps[i].up;
    sec.down[i] = tw * s.amps[i].down;
  }
  return sec;
}

double photon_number_impl(const WalkState& state, double alpha, double phi) {
  check_alpha(alpha);
  const SpinSectors sec = sectors(state, phi);
  const double num = kernels::gram_bilinear(sec.x, sec.up, alpha, true) +
                     kernels::gram_bilinear(sec.x, sec.down, alpha, true);
  const double den = kernels::gram_bilinear(sec.x, sec.up, alpha, false) +
                     kernels::gram_bilinear(sec.x, sec.down, alpha, false);
  return alpha * alpha * num / den;
}

}  // namespace

double coherent_overlap(int x, int y, double alpha) {
  check_alpha(alpha);
  const double d = static_cast<double>(x) - static_cast<double>(y);
  return std::exp(-d * d * alpha * alpha / 2.0);
}

double projective_probability(const CoherentWalkState& cs, int x) {
  check_alpha(cs.params.alpha);
  const double alpha = cs.params.alpha;
  const SpinSectors sec = sectors(cs.base);
  cd bu{0.0, 0.0}, bd{0.0, 0.0};
  for (std::size_t i = 0; i < sec.x.size(); ++i) {
    const double d = static_cast<double>(x) - sec.x[i];
    const double g = std::exp(-d * d * alpha * alpha / 2.0);
    bu += g * sec.up[i];
    bd += g * sec.down[i];
  }
  const double den = kernels::gram_bilinear(sec.x, sec.up, alpha, false) +
                     kernels::gram_bilinear(sec.x, sec.down, alpha, false);
  return (std::norm(bu) + std::norm(bd)) / den;
}

ReconstructionResult reconstruct_distribution(const ReadoutSeries& series, int degree) {
  if (degree < 2) throw std::invalid_argument("reconstruct: degree must be >= 2");
  std::map<int, std::vector<const ReadoutRecord*>> by_site;
  for (const auto& r : series) {
    check_alpha(r.alpha);
    by_site[r.x].push_back(&r);
  }
  if (by_site.empty()) throw InsufficientSamplesError("reconstruct: empty readout series");

  ReconstructionResult res;
  std::map<int, double> raw;
  for (const auto& [site, recs] : by_site) {
    std::vector<double> alphas;
    for (const auto* r : recs) alphas.push_back(r->alpha);
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 alphas.end());
    if (static_cast<int>(alphas.size()) < degree + 1)
      throw InsufficientSamplesError("reconstruct: need degree+1 distinct alphas per site");

    const auto n = static_cast<Eigen::Index>(recs.size());
    Eigen::MatrixXd v(n, degree + 1);
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = std::exp(-2.0 * recs[i]->alpha * recs[i]->alpha);
      double uj = 1.0;
      for (int j = 0; j <= degree; ++j) {
        v(i, j) = uj;
        uj *= u;
      }
      p(i) = recs[i]->p;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12)
      throw IllConditionedError("reconstruct: Vandermonde condition estimate exceeds 1e12");
    raw[site] = svd.solve(p)(0);
  }

  double total = 0.0;
  for (auto& [site, c0] : raw) {
    const double clamped = std::clamp(c0, 0.0, 1.0);
    res.max_clamped = std::max(res.max_clamped, std::abs(c0 - clamped));
    res.raw_sum += c0;
    raw[site] = clamped;
    total += clamped;
  }
  if (total <= 0.0) throw IllConditionedError("reconstruct: all fitted constants vanish");
  for (const auto& [site, c0] : raw) res.dist[site] = c0 / total;
  return res;
}

double photon_number(const CoherentWalkState& cs) {
  return photon_number_impl(cs.base, cs.params.alpha, 0.0);
}

double cross_moment(const WalkState& state, int m) {
  if (m < 0) throw std::invalid_argument("cross_moment: m must be nonnegative");
  const auto n = static_cast<int>(state.amps.size());
  double total = 0.0;
  for (int i = 0; i + m < n; ++i) {
    const double x = state.min_position + static_cast<double>(i);
    const double w = x * (x + m);
    const Spinor& a = state.amps[static_cast<std::size_t>(i)];
    const Spinor& b = state.amps[static_cast<std::size_t>(i + m)];
    const double cross = (std::conj(a.up) * b.up + std::conj(a.down) * b.down).real();
    total += 2.0 * w * cross;
  }
  return total;
}

double script_I(const WalkState& state, int m, int steps) {
  if (steps <= 0) throw std::invalid_argument("script_I: steps must be positive");
  return cross_moment(state, m) / (2.0 * steps * steps);
}

double photon_number_twisted(const WalkState& state, double alpha, double phi) {
  return photon_number_impl(state, alpha, phi);
}

TwistPair summed_and_differenced(const WalkState& state, double alpha) {
  const double a = photon_number_twisted(state, alpha, M_PI / 8.0);
  const double b = photon_number_twisted(state, alpha, 3.0 * M_PI / 8.0);
  return TwistPair{a + b, a - b};
}

double shifted_pair_delta(const WalkSpec& spec_plus, const WalkSpec& spec_minus,
                          double alpha, bool use_twist_pair) {
  check_alpha(alpha);
  const auto same = [](const WalkSpec& a, const WalkSpec& b) {
    return a.angles.theta1 == b.angles.theta1 && a.angles.theta2 == b.angles.theta2 &&
           a.phi == b.phi && a.steps == b.steps &&
           a.initial_spin.up == b.initial_spin.up && a.initial_spin.down == b.initial_spin.down;
  };
  if (!same(spec_plus, spec_minus))
    throw std::invalid_argument("shifted_pair_delta: specs must differ only in initial position");
  if (spec_plus.initial_position != -spec_minus.initial_position)
    throw std::invalid_argument("shifted_pair_delta: initial positions must be +m and -m");
  if (spec_plus.initial_position == 0)
    throw DegenerateShiftError("shifted_pair_delta: zero shift");

  const WalkState plus = evolve(spec_plus);
  const WalkState minus = evolve(spec_minus);
  if (use_twist_pair)
    return summed_and_differenced(minus, alpha).tilde - summed_and_differenced(plus, alpha).tilde;
  const CoherentParams params{alpha, 0.0};
  return photon_number({minus, params}) - photon_number({plus, params});
}

double coherent_tail_bound(const WalkState& state, double alpha, int m_start) {
  check_alpha(alpha);
  double bound = 0.0;
  const int span = static_cast<int>(state.amps.size());
  for (int m = m_start; m < span; m += 2)
    bound += 2.0 * alpha * alpha * std::exp(-0.5 * m * m * alpha * alpha) *
             std::abs(cross_moment(state, m));
  return bound;
}

}  // namespace cohwalk
