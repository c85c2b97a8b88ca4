#pragma once

#include <vector>

#include "chiraldecay/complex_matrix.hpp"
#include "chiraldecay/dispersion.hpp"

namespace chiraldecay {

// One discrete level: frequency, coupling to the bath, attachment site.
// Everything is expressed in units of the bath reference hopping rate.
struct Level {
  double omega;
  double kappa;
  int site;
};

class LevelChain {
 public:
  explicit LevelChain(std::vector<Level> levels);

  const std::vector<Level>& levels() const { return levels_; }
  int size() const { return static_cast<int>(levels_.size()); }

 private:
  std::vector<Level> levels_;
};

enum class BathKind { unidirectional, bidirectional };

// The N x N effective non-Hermitian matrix, with levels canonically sorted by
// ascending attachment site so that triangularity is literal. permutation[i]
// is the index in the caller's chain of the level at matrix row i.
struct EffectiveHamiltonian {
  int n = 0;
  ComplexMatrix entries;
  BathKind kind = BathKind::unidirectional;
  std::vector<Resonance> resonance_meta;  // per sorted level; empty for bidirectional
  std::vector<Level> sorted_levels;
  std::vector<int> permutation;
  double commutator_estimate = 0.0;  // Floquet BCH correction scale, see floquet_effective
};

// Markovian effective matrix for a chiral bath: diagonal
// omega_b - i kappa_b^2/(2 v_b), strictly-lower couplings
// -i (kappa_a kappa_b / v_b) e^{i k_b (n_a - n_b)}, exact zeros above.
EffectiveHamiltonian build_unidirectional(const LevelChain& chain, const Dispersion& dispersion);

// Closed form for the nearest-neighbor cosine band with hopping kappa_hop;
// requires every |omega_a| < 2 kappa_hop.
EffectiveHamiltonian build_bidirectional(const LevelChain& chain, double kappa_hop);

struct QuadratureSpec {
  int grid_points = 32768;
  double pv_exclusion = -1.0;  // < 0: default 2*pi/grid_points
};

// Markovian matrix elements by direct quadrature: the on-shell delta term is
// collapsed analytically at k_beta, the principal-value term is integrated on
// a grid placed symmetrically about the pole with the band linearized around
// it. Serves as an independent oracle for the closed form.
ComplexMatrix delta_numeric(const LevelChain& chain, const Dispersion& dispersion,
                            const QuadratureSpec& quad = {});

// The closed form the quadrature is checked against (same ordering
// conventions as build_unidirectional).
ComplexMatrix markov_delta_closed_form(const LevelChain& chain, const Dispersion& dispersion);

// Eigenvalues of H with |Im| <= tol: candidate bound states in the continuum.
std::vector<cplx> find_bound_states(const EffectiveHamiltonian& h, double tol);

}  // namespace chiraldecay
