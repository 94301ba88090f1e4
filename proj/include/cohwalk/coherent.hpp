#ifndef COHWALK_COHERENT_HPP
#define COHWALK_COHERENT_HPP

#include "cohwalk/types.hpp"

// Coherent-state-space semantics over walk amplitudes: the position register
// lives on the lattice of coherent states |x alpha> with real spacing alpha,
// whose pairwise overlaps form the Gaussian Gram matrix
//   <x alpha | y alpha> = exp(-(x-y)^2 alpha^2 / 2).
// Every observable here is an exact double sum over the amplitude support;
// the familiar orthogonal-space quantities are recovered as alpha grows.
// Expectation values divide by the exact physical norm A* G A, so amplitude
// vectors need not be unit in the Gram sense (for single-site initial walks
// the norm is exactly sum |A|^2 anyway).

namespace cohwalk {

struct CoherentParams {
  double alpha = 1.0;  // lattice spacing in phase space, > 0
  double phi = 0.0;    // twist accumulated per translation
};

/// Walk amplitudes reinterpreted on the coherent lattice. `base` carries any
/// e^{-i x phi} twist already applied.
struct CoherentWalkState {
  WalkState base;
  CoherentParams params;
};

struct ReadoutRecord {
  double alpha = 0.0;
  int x = 0;
  double p = 0.0;
};
using ReadoutSeries = std::vector<ReadoutRecord>;

struct ReconstructionResult {
  PositionDistribution dist;
  double max_clamped = 0.0;      // largest |value| clamped away at any site
  double raw_sum = 0.0;          // sum of fitted constants before renormalizing
};

/// <x alpha | y alpha> for real alpha.
double coherent_overlap(int x, int y, double alpha);

/// P(x alpha) = sum_sigma |<x alpha, sigma | psi>|^2 / <psi|psi>, evaluated
/// with full Gram rows over the support.
double projective_probability(const CoherentWalkState& cs, int x);

/// Per-site least-squares fit of readout probabilities against powers
/// {1, u, u^2, ..., u^degree} of u = exp(-2 alpha^2), the leading
/// nonvanishing overlap power for this two-translation walk (site separation
/// 2); the constant terms, clamped to [0,1] and renormalized, estimate
/// P_N(x). Throws InsufficientSamplesError with fewer than degree+1 distinct
/// alphas at a site and IllConditionedError when the Vandermonde condition
/// estimate exceeds 1e12.
ReconstructionResult reconstruct_distribution(const ReadoutSeries& series, int degree);

/// Expected photon number <a+ a> = alpha^2 (A* G_xy A) / (A* G A) with
/// G_xy(x,y) = x y exp(-(x-y)^2 alpha^2/2).
double photon_number(const CoherentWalkState& cs);

/// C(m) = sum_sigma sum_x x(x+m) 2 Re(A*_{x,sigma} A_{x+m,sigma});
/// C(0) = 2 M2. Operates on untwisted amplitudes.
double cross_moment(const WalkState& state, int m);

/// I(m) = C(m) / (2 N^2); I(0) = M2/N^2.
double script_I(const WalkState& state, int m, int steps);

/// Photon number of the twisted state (amplitudes times e^{-i x phi}, the
/// walk's own twist factorization); equals running the twisted walk and
/// measuring. For states with the paper's real/imaginary amplitude structure
/// this reduces to alpha^2 [M2 + sum_{m even} e^{-m^2 alpha^2/2} cos(m phi) C(m)].
double photon_number_twisted(const WalkState& state, double alpha, double phi);

struct TwistPair {
  double tilde = 0.0;  // N_w(pi/8) + N_w(3pi/8) ~ 2 alpha^2 M2
  double delta = 0.0;  // N_w(pi/8) - N_w(3pi/8), isolates the m=2 correction
};

TwistPair summed_and_differenced(const WalkState& state, double alpha);

/// Photon-number difference between the walk started at -m and at +m
/// (plain N_w, or the twist-pair sum when use_twist_pair). Dividing by
/// 4 m alpha^2 (or 8 m alpha^2) estimates |M1|. The two specs must be
/// identical apart from initial_position = +-m; throws DegenerateShiftError
/// when m = 0.
double shifted_pair_delta(const WalkSpec& spec_plus, const WalkSpec& spec_minus,
                          double alpha, bool use_twist_pair);

/// sum_{m >= m_start, m even} 2 alpha^2 e^{-m^2 alpha^2/2} |C(m)|; upper
/// bound for the neglected Gram tail in the twist-pair identities.
double coherent_tail_bound(const WalkState& state, double alpha, int m_start);

}  // namespace cohwalk

#endif
