#pragma once

#include <vector>

#include "chiraldecay/lattice_state.hpp"
#include "chiraldecay/model.hpp"

namespace chiraldecay::baths {

enum class HoppingWindow { none, fejer, lanczos };

// Long-range hoppings of the 1D metacrystal realizing a linear chiral band
// omega(k) ~ v k: theta_0 = 0, theta_n = i v (-1)^n / n (times the window),
// theta_{-n} = conj(theta_n).
struct MetacrystalHoppings {
  int range = 0;                // M
  std::vector<cplx> theta;      // theta[m + range], m in [-range, range]
  cplx at(int m) const { return theta[m + range]; }

  // Truncated band reconstruction, omega(k) = sum_m theta_m e^{imk}.
  double omega(double k) const;
  double domega_dk(double k) const;
};

MetacrystalHoppings metacrystal_hoppings(double v, int range_m,
                                         HoppingWindow window = HoppingWindow::fejer);

// Exact RK4 integration of the long-range chain (sites 0..length-1) with
// side-coupled levels; same contract shape as hofstadter_evolve. The
// downstream (large-site) end is the monitored boundary.
ExactTrace metacrystal_evolve(const MetacrystalHoppings& hoppings, int length,
                              const std::vector<Level>& attachments,
                              const std::vector<cplx>& c0, const std::vector<double>& times,
                              double dt);

}  // namespace chiraldecay::baths
