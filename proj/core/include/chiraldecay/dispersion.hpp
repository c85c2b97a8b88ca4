#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "chiraldecay/errors.hpp"

namespace chiraldecay {

// Contract-precondition violations (sorted grids, step sizes, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// w(k) = 2 kappa cos k  (time-reversal symmetric; bidirectional transport)
struct CosineBand {
  double kappa_hop;
};

// w(k) = omega0 + v k on -pi <= k < pi
struct ChiralLinear {
  double v;
  double omega0;
};

// w(k) = (pi + k)/T  mod 2pi/T  (anomalous Floquet quasienergy, v = 1/T)
struct FloquetSawtooth {
  double period;
};

// Numerically computed chiral branch (e.g. Harper edge states), interpolated
// by a monotone (Fritsch-Carlson) cubic.
class TabulatedChiral {
 public:
  TabulatedChiral(std::vector<double> k_samples, std::vector<double> omega_samples);

  const std::vector<double>& k_samples() const { return k_; }
  const std::vector<double>& omega_samples() const { return w_; }

  double omega(double k) const;   // monotone cubic evaluation, clamped domain
  double k_min() const { return k_.front(); }
  double k_max() const { return k_.back(); }
  double omega_min() const { return w_.front(); }
  double omega_max() const { return w_.back(); }
  double min_spacing() const { return min_spacing_; }

 private:
  std::vector<double> k_, w_, slope_;  // slope_: endpoint derivatives per node
  double min_spacing_;
};

using Dispersion = std::variant<CosineBand, ChiralLinear, FloquetSawtooth, TabulatedChiral>;

bool is_chiral(const Dispersion& d);

// Principal-branch evaluation (sawtooth is evaluated on -pi <= k < pi).
double omega_at(const Dispersion& d, double k);

// [min, max] of the band over the Brillouin zone (sawtooth: principal branch).
std::pair<double, double> band_range(const Dispersion& d);

struct Resonance {
  double k_beta;
  double v_beta;
};

// Solve w(k_beta) = omega_level on the chiral branch; bisection (80 iteration
// cap) on monotone branches, analytic inversion for the sawtooth (its
// quasienergy wraps, so the level is first reduced mod 2pi/T). Group velocity
// is analytic where available, centered difference for tabulated branches.
// Throws OutOfBandError / MultipleRootsError (CosineBand is always rejected).
Resonance solve_resonance(const Dispersion& d, double omega_level);

}  // namespace chiraldecay
