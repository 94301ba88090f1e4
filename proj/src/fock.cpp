#include "cohwalk/fock.hpp"

#include <cmath>
#include <memory>
#include <mutex>

#include "cohwalk/walk.hpp"

namespace cohwalk {

namespace {

constexpr double kTailTol = 1e-12;
const cd kI{0.0, 1.0};

void check_space(const FockSpace& space) {
  if (space.dim <= 0) throw std::invalid_argument("fock: dimension must be positive");
}

void check_tail(double mu, int dim) {
  if (poisson_tail(mu, dim) >= kTailTol)
    throw TruncationError("fock: truncation too small for the requested coherent amplitude");
}

// Dispersive and displacement matrices are reused heavily across walk steps
// and sweep points; memoize by argument and dimension.
struct OpCache {
  std::mutex mutex;
  std::map<std::tuple<double, double, int>, std::shared_ptr<const kernels::CMatrix>> displace;
  std::map<std::pair<double, int>, std::shared_ptr<const kernels::CMatrix>> dispersive;
};

OpCache& cache() {
  static OpCache c;
  return c;
}

std::shared_ptr<const kernels::CMatrix> cached_displacement(cd beta, int dim) {
  auto& c = cache();
  const auto key = std::make_tuple(beta.real(), beta.imag(), dim);
  {
    std::scoped_lock lock(c.mutex);
    if (auto it = c.displace.find(key); it != c.displace.end()) return it->second;
  }
  auto m = std::make_shared<kernels::CMatrix>(displacement_op(beta, FockSpace{dim}));
  std::scoped_lock lock(c.mutex);
  return c.displace.emplace(key, std::move(m)).first->second;
}

std::shared_ptr<const kernels::CMatrix> cached_dispersive(double gt, int dim) {
  auto& c = cache();
  const auto key = std::make_pair(gt, dim);
  {
    std::scoped_lock lock(c.mutex);
    if (auto it = c.dispersive.find(key); it != c.dispersive.end()) return it->second;
  }
  auto m = std::make_shared<kernels::CMatrix>(dispersive_op(gt, FockSpace{dim}));
  std::scoped_lock lock(c.mutex);
  return c.dispersive.emplace(key, std::move(m)).first->second;
}

}  // namespace

double poisson_tail(double mu, int dim) {
  if (mu <= 0.0) return 0.0;
  if (dim <= 0) return 1.0;
  // sum_{n >= dim} e^{-mu} mu^n / n! in log space; terms decay geometrically
  // once n > mu.
  double tail = 0.0;
  double log_term = -mu + dim * std::log(mu) - std::lgamma(dim + 1.0);
  double term = std::exp(log_term);
  for (int n = dim; n < dim + 20000; ++n) {
    tail += term;
    term *= mu / (n + 1);
    if (term < tail * 1e-18 && n > mu) break;
  }
  return tail;
}

FockSpace fock_space_for(const WalkSpec& spec, double alpha) {
  const double reach = (std::abs(spec.initial_position) + 2.0 * spec.steps) * alpha;
  const double mu = reach * reach;
  return FockSpace{static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu) + 20.0))};
}

Eigen::VectorXcd coherent_vector(cd beta, const FockSpace& space) {
  check_space(space);
  check_tail(std::norm(beta), space.dim);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim);
  if (beta == cd{0.0, 0.0}) {
    v(0) = 1.0;
    return v;
  }
  v(0) = std::exp(-std::norm(beta) / 2.0);
  for (int n = 1; n < space.dim; ++n) v(n) = v(n - 1) * beta / std::sqrt(static_cast<double>(n));
  v.normalize();  // restore unit norm after truncation
  return v;
}

Eigen::MatrixXcd displacement_op(cd beta, const FockSpace& space) {
  check_space(space);
  const int d = space.dim;
  // H = i (beta a+ - beta* a) is Hermitian tridiagonal; D = e^{-i H}.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    const double r = std::sqrt(n + 1.0);
    h(n + 1, n) = kI * beta * r;
    h(n, n + 1) = std::conj(h(n + 1, n));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXcd phases =
      (-kI * es.eigenvalues().cast<cd>().array()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd dispersive_op(double gt, const FockSpace& space) {
  check_space(space);
  const int d = space.dim;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (int n = 0; n < d; ++n) {
    m(n, n) = std::exp(kI * (gt * n));          // qubit up
    m(d + n, d + n) = std::exp(-kI * (gt * n)); // qubit down
  }
  return m;
}

GateSequence compile_translation(double alpha, bool echo) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("compile_translation: alpha must be a nonnegative real");
  GateSequence seq;
  seq.push_back(Gate::dispersive(M_PI / 2.0));
  seq.push_back(Gate::displace(kI * alpha));
  if (echo) {
    seq.push_back(Gate::qubit_x());
    seq.push_back(Gate::dispersive(M_PI / 2.0));
    seq.push_back(Gate::qubit_x());
  } else {
    seq.push_back(Gate::dispersive(3.0 * M_PI / 2.0));
  }
  return seq;
}

namespace {

void apply_block_matrix(const kernels::CMatrix& m, QubitCavityState& state) {
  // m is dim x dim, applied to each spin block independently.
  const int d = state.dim;
  Eigen::VectorXcd in = state.amps.segment(0, d), out;
  kernels::matvec(m, in, out);
  state.amps.segment(0, d) = out;
  in = state.amps.segment(d, d);
  kernels::matvec(m, in, out);
  state.amps.segment(d, d) = out;
}

void apply_full_matrix(const kernels::CMatrix& m, QubitCavityState& state) {
  Eigen::VectorXcd out;
  kernels::matvec(m, state.amps, out);
  state.amps = out;
}

void apply_qubit(const Eigen::Matrix2cd& q, QubitCavityState& state) {
  const int d = state.dim;
  for (int n = 0; n < d; ++n) {
    const cd u = state.amps(n), w = state.amps(d + n);
    state.amps(n) = q(0, 0) * u + q(0, 1) * w;
    state.amps(d + n) = q(1, 0) * u + q(1, 1) * w;
  }
}

}  // namespace

void apply_gate(const Gate& gate, QubitCavityState& state) {
  switch (gate.kind) {
    case Gate::Kind::Dispersive:
      apply_full_matrix(*cached_dispersive(gate.angle, state.dim), state);
      return;
    case Gate::Kind::Displace:
      apply_block_matrix(*cached_displacement(gate.beta, state.dim), state);
      return;
    case Gate::Kind::QubitX: {
      Eigen::Matrix2cd x;
      x << cd{0, 0}, cd{1, 0}, cd{1, 0}, cd{0, 0};
      apply_qubit(x, state);
      return;
    }
    case Gate::Kind::QubitRx:
      apply_qubit(coin_rx(gate.angle), state);
      return;
    case Gate::Kind::QubitRz:
      apply_qubit(coin_rz(gate.angle), state);
      return;
  }
}

void apply_sequence(const GateSequence& seq, QubitCavityState& state) {
  for (const auto& g : seq) apply_gate(g, state);
}

Eigen::MatrixXcd sequence_matrix(const GateSequence& seq, const FockSpace& space) {
  check_space(space);
  const int n = 2 * space.dim;
  Eigen::MatrixXcd m(n, n);
  for (int col = 0; col < n; ++col) {
    QubitCavityState s{space.dim, Eigen::VectorXcd::Zero(n)};
    s.amps(col) = 1.0;
    apply_sequence(seq, s);
    m.col(col) = s.amps;
  }
  return m;
}

QubitCavityState run_walk_fock(const WalkSpec& spec, double alpha, const FockSpace& space) {
  check_space(space);
  if (!(alpha > 0.0)) throw std::invalid_argument("run_walk_fock: alpha must be positive");
  const double reach = (std::abs(spec.initial_position) + 2.0 * spec.steps) * alpha;
  check_tail(reach * reach, space.dim);
  if (std::abs(spec.initial_spin.norm_sq() - 1.0) > 1e-12)
    throw std::invalid_argument("run_walk_fock: initial spin must have unit norm");

  const Eigen::VectorXcd cav =
      coherent_vector(cd{spec.initial_position * alpha, 0.0}, space);
  QubitCavityState state{space.dim, Eigen::VectorXcd::Zero(2 * space.dim)};
  state.amps.segment(0, space.dim) = spec.initial_spin.up * cav;
  state.amps.segment(space.dim, space.dim) = spec.initial_spin.down * cav;

  GateSequence step;
  const GateSequence t = compile_translation(alpha, false);
  step.push_back(Gate::qubit_rx(spec.angles.theta1));
  step.insert(step.end(), t.begin(), t.end());
  if (spec.phi != 0.0) step.push_back(Gate::qubit_rz(spec.phi));
  step.push_back(Gate::qubit_rx(spec.angles.theta2));
  step.insert(step.end(), t.begin(), t.end());
  if (spec.phi != 0.0) step.push_back(Gate::qubit_rz(spec.phi));

  for (int n = 0; n < spec.steps; ++n) apply_sequence(step, state);
  return state;
}

double expected_photons(const QubitCavityState& state) {
  const int d = state.dim;
  double num = 0.0, den = 0.0;
  for (int n = 0; n < d; ++n) {
    const double p = std::norm(state.amps(n)) + std::norm(state.amps(d + n));
    num += n * p;
    den += p;
  }
  return num / den;
}

double sequence_fidelity(const GateSequence& seq, double alpha, int site_min, int site_max,
                         const FockSpace& space) {
  check_space(space);
  if (site_min > site_max) throw std::invalid_argument("sequence_fidelity: empty site range");
  const int reach = std::max(std::abs(site_min), std::abs(site_max)) + 1;
  check_tail(reach * alpha * reach * alpha, space.dim);

  double worst = 1.0;
  for (int x = site_min; x <= site_max; ++x) {
    for (int spin = 0; spin < 2; ++spin) {
      const Eigen::VectorXcd in = coherent_vector(cd{x * alpha, 0.0}, space);
      const int shift = (spin == 0) ? 1 : -1;
      const Eigen::VectorXcd target = coherent_vector(cd{(x + shift) * alpha, 0.0}, space);
      QubitCavityState s{space.dim, Eigen::VectorXcd::Zero(2 * space.dim)};
      s.amps.segment(spin * space.dim, space.dim) = in;
      apply_sequence(seq, s);
      const cd overlap = target.dot(s.amps.segment(spin * space.dim, space.dim));
      worst = std::min(worst, std::norm(overlap));
    }
  }
  return worst;
}

std::vector<Spinor> lattice_amplitudes(const QubitCavityState& state, double alpha,
                                       const std::vector<int>& sites) {
  const auto n = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = static_cast<double>(sites[i] - sites[j]);
      gram(i, j) = std::exp(-d * d * alpha * alpha / 2.0);
    }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("lattice_amplitudes: Gram factorization failed");

  Eigen::VectorXcd bu(n), bd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXcd site = coherent_vector(cd{sites[i] * alpha, 0.0}, FockSpace{state.dim});
    bu(i) = site.dot(state.amps.segment(0, state.dim));
    bd(i) = site.dot(state.amps.segment(state.dim, state.dim));
  }
  const Eigen::VectorXcd au = ldlt.solve(bu), ad = ldlt.solve(bd);
  std::vector<Spinor> out(sites.size());
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = Spinor{au(i), ad(i)};
  return out;
}

}  // namespace cohwalk
