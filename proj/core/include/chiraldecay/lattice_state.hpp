#pragma once

#include <variant>
#include <vector>

#include "chiraldecay/complex_matrix.hpp"

namespace chiraldecay {

struct ChainGeometry {
  int length;
};

struct StripGeometry {
  int l_n;  // columns, n = 1..l_n (edge at n = 1)
  int l_m;  // rows, m = 0..l_m-1
};

using LatticeGeometry = std::variant<ChainGeometry, StripGeometry>;

// Exact microscopic state: bath amplitudes on the finite lattice plus the
// attached level amplitudes. Strip storage is row-major, (n-1)*l_m + m.
struct LatticeState {
  std::vector<cplx> bath_amplitudes;
  std::vector<cplx> level_amplitudes;
  LatticeGeometry geometry{ChainGeometry{0}};
  double time = 0.0;

  double total_norm_sq() const {
    double s = 0.0;
    for (const auto& v : bath_amplitudes) s += std::norm(v);
    for (const auto& v : level_amplitudes) s += std::norm(v);
    return s;
  }
};

// Level occupations of an exact integration on the requested time grid.
struct ExactTrace {
  std::vector<double> times;
  std::vector<std::vector<cplx>> level_amplitudes;     // [time][level]
  std::vector<std::vector<double>> level_occupations;  // [time][level]
  double norm_drift = 0.0;                             // max |norm(t) - 1|
  LatticeState final_state;
};

}  // namespace chiraldecay
