#pragma once

#include <optional>
#include <vector>

#include "chiraldecay/model.hpp"

namespace chiraldecay {

struct DecayTrace {
  std::vector<double> times;
  std::vector<std::vector<cplx>> amplitudes;  // amplitudes[t][alpha], sorted-level order
  std::vector<double> survival;               // P(t) = sum_a |c_a(t)|^2
};

// c(t) = exp(-iHt) c0 on the grid. Uniform grids reuse the single-step
// propagator; arbitrary grids get one matrix exponential per point.
// c0 must be normalized, times sorted with times[0] = 0.
DecayTrace propagate(const EffectiveHamiltonian& h, const std::vector<cplx>& c0,
                     const std::vector<double>& times);

struct QuiescenceResult {
  std::vector<double> times;
  std::vector<double> sigma_curve;     // sigma_max(t), the tight upper bound on P(t)
  std::optional<double> tau;           // resilience time, when requested & found
  bool no_crossing = false;            // sigma never dropped below p_b before t_max
  std::vector<cplx> optimal_state;     // top eigenvector of A^dag A
  double p_b = 0.0;
};

// sigma_max(t) = top eigenvalue of A(t)^dag A(t), A = exp(-iHt), per grid
// point. optimal_state is taken at the last grid point unless a specific
// index is requested.
QuiescenceResult sigma_max_curve(const EffectiveHamiltonian& h, const std::vector<double>& times,
                                 std::optional<int> state_index = std::nullopt);

// Largest tau with sigma_max > p_b on (0, tau) and sigma_max(tau+) < p_b;
// grid scan followed by bisection to dt/100. If sigma never crosses before
// t_max the result is flagged (no_crossing) with tau = t_max as a lower bound.
QuiescenceResult quiescence_time(const EffectiveHamiltonian& h, double p_b, double t_max,
                                 double dt);

// One sigma scan, many reference levels: taus[i] corresponds to p_bs[i].
struct ResilienceScan {
  std::vector<double> taus;
  std::vector<bool> no_crossing;
};
ResilienceScan resilience_times(const EffectiveHamiltonian& h, const std::vector<double>& p_bs,
                                double t_max, double dt);

struct BlochResult {
  DecayTrace trace;
  double t_b = 0.0;           // Bloch period 2 pi / C
  std::vector<cplx> eigs;     // omega_1 + C(a-1) - i Delta
  EffectiveHamiltonian hamiltonian;
};

// Wannier-Stark ladder of N levels (omega_a = C(a-1)), uniform coupling,
// consecutive sites, decaying into a linear chiral band; the band is sized so
// every level is embedded.
BlochResult bloch_scenario(int n, double c_gradient, double delta, const std::vector<cplx>& c0,
                           const std::vector<double>& times);

// Degenerate reference chain used by the quiescence scenarios: N levels,
// omega = 0, consecutive sites, kappa^2/(2v) = delta.
EffectiveHamiltonian degenerate_chain_hamiltonian(int n, double delta = 1.0);

}  // namespace chiraldecay
