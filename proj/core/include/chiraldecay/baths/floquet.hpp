#pragma once

#include <vector>

#include "chiraldecay/lattice_state.hpp"
#include "chiraldecay/model.hpp"

namespace chiraldecay::baths {

// One drive cycle of the binary lattice: two pi/2 dimer-swap steps of
// duration t1 each (kappa_bath t1 = pi/2, enforced), then a step of duration
// t2 where sublattice A couples to the levels.
class FloquetCycle {
 public:
  FloquetCycle(double t1, double t2, double kappa_bath, std::vector<double> rho,
               std::vector<int> sites);

  // kappa_bath derived from the swap condition kappa t1 = pi/2.
  static FloquetCycle make(double t1, double t2, std::vector<double> rho,
                           std::vector<int> sites);

  double t1() const { return t1_; }
  double t2() const { return t2_; }
  double kappa_bath() const { return kappa_; }
  double period() const { return 2.0 * t1_ + t2_; }
  const std::vector<double>& rho() const { return rho_; }
  const std::vector<int>& sites() const { return sites_; }
  int levels() const { return static_cast<int>(rho_.size()); }

 private:
  double t1_, t2_, kappa_;
  std::vector<double> rho_;
  std::vector<int> sites_;
};

// Sublattice state for one cycle application; a and b must have equal size.
struct BinaryLatticeState {
  std::vector<cplx> a, b;
  std::vector<cplx> levels;
};

// Applies exactly one cycle in place: step 1 swaps (A_j, B_j), step 2 swaps
// (B_j, A_{j+1}) (each an exact -i sigma_x pulse), step 3 rotates each
// (level, A_site) pair by the closed-form 2x2 unitary of duration t2 with
// the level frequency on the diagonal.
void floquet_apply_cycle(const FloquetCycle& cycle, const std::vector<double>& omega_levels,
                         BinaryLatticeState& state);

// Stroboscopic level amplitudes at t = 0, T, ..., n_cycles T starting from
// bath vacuum. lattice_size counts unit cells (one A and one B site each);
// it must be even and >= 2 n_cycles + 4 so nothing wraps. Raises
// WraparoundError if > 1e-8 of the norm reaches the chain ends.
ExactTrace floquet_cycle_evolve(const FloquetCycle& cycle, int lattice_size,
                                const std::vector<double>& omega_levels,
                                const std::vector<cplx>& c0, int n_cycles);

// Markovian reduction of the drive: kappa_a = (t2/T) rho_a decaying into the
// sawtooth quasienergy band with v = 1/T. commutator_estimate carries the
// scale of the leading Baker-Campbell-Hausdorff correction that the
// reduction drops.
EffectiveHamiltonian floquet_effective(const FloquetCycle& cycle,
                                       const std::vector<double>& omega_levels);

}  // namespace chiraldecay::baths
