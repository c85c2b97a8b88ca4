#pragma once

#include "chiraldecay/model.hpp"

namespace chiraldecay {

enum class StatisticsKind { fermion, boson };

// Probability that none of N indistinguishable particles (one per level at
// t = 0) has decayed by time t: |det U|^2 for fermions, |perm U|^2 for
// bosons, U = exp(-iHt). The fermion path uses det(exp(M)) = e^{tr M}
// directly; the boson path needs the full propagator (N <= 24).
double nondecay_probability(const EffectiveHamiltonian& h, double t, StatisticsKind stats);

// Total many-body decay rate of a chiral chain: sum_a kappa_a^2 / v_a. Equals
// -2 sum Im diag(H) for the matching unidirectional build.
double chiral_decay_rate(const LevelChain& chain, const Dispersion& dispersion);

}  // namespace chiraldecay
