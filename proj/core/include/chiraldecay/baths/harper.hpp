#pragma once

#include <utility>
#include <vector>

#include "chiraldecay/dispersion.hpp"
#include "chiraldecay/lattice_state.hpp"

namespace chiraldecay::baths {

enum class GapSelector { lower, upper };

struct HarperEdgeResult {
  // Monotone edge branch crossing the selected gap, sampled in k.
  std::vector<double> branch_k;
  std::vector<double> branch_omega;
  std::vector<std::pair<double, double>> bulk_bands;  // [lo, hi], ascending
  std::pair<double, double> gap;                      // selected gap interval

  // The branch as an interpolable dispersion; requires positive velocity.
  TabulatedChiral tabulated() const;
};

// Edge spectrum of the semi-infinite Harper operator
//   kappa (A_{n+1} + A_{n-1}) + 2 kappa cos(k + n phi) A_n = omega A_n,
// n = 1..n_max, A_0 = 0. Eigenstates with >= 0.9 weight on the first 8
// columns are classified as edge modes; states pinned to the artificial far
// edge are dropped. Raises NoGapError when the bulk spectrum has no gap
// wider than 0.3 kappa and TruncationError when doubling n_max moves the
// branch by more than 1e-6.
HarperEdgeResult harper_edge_modes(double phi, double kappa, int n_max,
                                   const std::vector<double>& k_grid,
                                   GapSelector gap = GapSelector::lower,
                                   bool check_truncation = true);

struct StripAttachment {
  int n;
  int m;
  double kappa;
  double omega;
};

// Exact single-particle integration (classical RK4, fixed step) of the
// Harper-Hofstadter strip with side-coupled levels, starting from bath
// vacuum and normalized level amplitudes c0. Raises BoundaryReachedError if
// more than 1e-6 of the norm accumulates within 5 rows of the far
// m-boundary.
ExactTrace hofstadter_evolve(double phi, double kappa, StripGeometry strip,
                             const std::vector<StripAttachment>& attachments,
                             const std::vector<cplx>& c0, const std::vector<double>& times,
                             double dt);

}  // namespace chiraldecay::baths
