#ifndef COHWALK_FOCK_HPP
#define COHWALK_FOCK_HPP

#include <Eigen/Dense>

#include "cohwalk/kernels.hpp"
#include "cohwalk/types.hpp"

// Brute-force ground truth on the qubit (x) truncated-cavity space. The
// spin-dependent translation is realized by the gate sequence
//   T(alpha) = U(3t*) D(i alpha) U(t*),   g t* = pi/2,
// with the dispersive phase convention e^{+i gt n} on qubit-up (the sign for
// which the sequence maps |x alpha, up> to |(x+1) alpha, up> with no spurious
// phase for real alpha); the echo variant replaces U(3t*) by X U(t*) X.
// Gate primitives act as dense matrix-vector products through the shared
// matvec kernel; there is no sparsity exploitation.

namespace cohwalk {

struct FockSpace {
  int dim = 0;  // cavity levels 0 .. dim-1
};

/// P(X >= dim) for X ~ Poisson(mu); the truncation leakage proxy.
double poisson_tail(double mu, int dim);

/// Truncation rule dim = ceil(mu + 10 sqrt(mu) + 20) with
/// mu = ((|m| + 2N) alpha)^2; keeps the Poisson tail below 1e-12 for every
/// coherent amplitude the walk can reach.
FockSpace fock_space_for(const WalkSpec& spec, double alpha);

/// State vector of 2*dim amplitudes, laid out [up block | down block].
struct QubitCavityState {
  int dim = 0;
  Eigen::VectorXcd amps;

  double norm_sq() const { return amps.squaredNorm(); }
};

/// Normalized truncated coherent state. Throws TruncationError when the
/// Poisson tail at |beta|^2 is >= 1e-12.
Eigen::VectorXcd coherent_vector(cd beta, const FockSpace& space);

/// D(beta) = exp(beta a+ - beta* a) via eigendecomposition of the Hermitian
/// i(beta a+ - beta* a); unitary up to truncation.
Eigen::MatrixXcd displacement_op(cd beta, const FockSpace& space);

/// U(gt) = diag over qubit (x) number basis with phase e^{+i gt n} on up and
/// e^{-i gt n} on down, returned dense on the full 2*dim space.
Eigen::MatrixXcd dispersive_op(double gt, const FockSpace& space);

struct Gate {
  enum class Kind { Dispersive, Displace, QubitX, QubitRx, QubitRz };
  Kind kind = Kind::QubitX;
  double angle = 0.0;  // gt for Dispersive, theta for QubitRx, phi for QubitRz
  cd beta{0.0, 0.0};   // Displace argument

  static Gate dispersive(double gt) { return {Kind::Dispersive, gt, {}}; }
  static Gate displace(cd beta) { return {Kind::Displace, 0.0, beta}; }
  static Gate qubit_x() { return {Kind::QubitX, 0.0, {}}; }
  static Gate qubit_rx(double theta) { return {Kind::QubitRx, theta, {}}; }
  static Gate qubit_rz(double phi) { return {Kind::QubitRz, phi, {}}; }
};

/// Gates listed in application order (front acts first).
using GateSequence = std::vector<Gate>;

/// Primitive schedule for T(alpha); echo=true uses the X U(t*) X form of
/// U(3t*).
GateSequence compile_translation(double alpha, bool echo);

/// Applies one gate in place. Dispersive and Displace go through the dense
/// matvec kernel; qubit gates mix the two blocks pointwise.
void apply_gate(const Gate& gate, QubitCavityState& state);

/// Applies a sequence front to back.
void apply_sequence(const GateSequence& seq, QubitCavityState& state);

/// Dense matrix of a gate sequence (columns = images of basis states).
Eigen::MatrixXcd sequence_matrix(const GateSequence& seq, const FockSpace& space);

/// Full walk in the cavity: prepares |m alpha> (x) spin and runs N steps of
/// coin / compiled translation / optional twist gates.
QubitCavityState run_walk_fock(const WalkSpec& spec, double alpha, const FockSpace& space);

/// <a+ a> traced over the qubit, normalized by the state norm.
double expected_photons(const QubitCavityState& state);

/// Minimum over sites in [site_min, site_max] and both spins of
/// |<(x+-1) alpha, sigma| seq |x alpha, sigma>|^2.
double sequence_fidelity(const GateSequence& seq, double alpha, int site_min, int site_max,
                         const FockSpace& space);

/// Gram-aware projection of a cavity state back onto lattice amplitudes:
/// solves G A = b per spin with b_x = <x alpha, sigma | psi> over `sites`.
std::vector<Spinor> lattice_amplitudes(const QubitCavityState& state, double alpha,
                                       const std::vector<int>& sites);

}  // namespace cohwalk

#endif
