#ifndef COHWALK_TYPES_HPP
#define COHWALK_TYPES_HPP

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohwalk {

using cd = std::complex<double>;

/// Coin rotation angles, both in [0, pi].
struct CoinAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// Two-component coin amplitude (|up>, |down>).
struct Spinor {
  cd up{0.0, 0.0};
  cd down{0.0, 0.0};

  double norm_sq() const { return std::norm(up) + std::norm(down); }
};

/// Full parameter bundle for one walk: coins, twist, step count and the
/// initial product state |m> (x) |spin>.
struct WalkSpec {
  CoinAngles angles;
  double phi = 0.0;  // R_z twist per translation; 0 disables the gate
  int steps = 0;
  int initial_position = 0;
  Spinor initial_spin{cd{1.0, 0.0}, cd{0.0, 0.0}};
};

/// Dense two-spinor amplitude array over a contiguous position window.
/// Positions run min_position .. min_position + size() - 1.
struct WalkState {
  int min_position = 0;
  std::vector<Spinor> amps;

  int max_position() const { return min_position + static_cast<int>(amps.size()) - 1; }
  std::size_t size() const { return amps.size(); }

  /// Amplitude at absolute position x (zero outside the stored window).
  Spinor amplitude(int x) const {
    const int i = x - min_position;
    if (i < 0 || i >= static_cast<int>(amps.size())) return Spinor{};
    return amps[static_cast<std::size_t>(i)];
  }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps) s += a.norm_sq();
    return s;
  }
};

using PositionDistribution = std::map<int, double>;

struct GapClosedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncationError : std::runtime_error {  // "TruncationTooSmall"
  using std::runtime_error::runtime_error;
};

struct InsufficientSamplesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllConditionedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateShiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cohwalk

#endif
