#include "chiraldecay/manybody.hpp"

#include <cmath>

#include "chiraldecay/numerics.hpp"

namespace chiraldecay {

double nondecay_probability(const EffectiveHamiltonian& h, double t, StatisticsKind stats) {
  if (!(t >= 0.0)) throw PreconditionError("nondecay_probability: t must be >= 0");
  if (stats == StatisticsKind::fermion) {
    // det exp(-iHt) = exp(-i tr(H) t); only the trace survives
    cplx tr = 0.0;
    for (int i = 0; i < h.n; ++i) tr += h.entries(i, i);
    return std::norm(std::exp(-cplx(0.0, 1.0) * tr * t));
  }
  if (h.n > 24)
    throw TooLargeError("nondecay_probability: boson permanent limited to N <= 24");
  ComplexMatrix m = h.entries;
  m *= cplx(0.0, -t);
  return std::norm(numerics::permanent(numerics::expm(m)));
}

double chiral_decay_rate(const LevelChain& chain, const Dispersion& dispersion) {
  if (!is_chiral(dispersion))
    throw MultipleRootsError("chiral_decay_rate: dispersion must be chiral");
  double rate = 0.0;
  for (const auto& l : chain.levels()) {
    const Resonance r = solve_resonance(dispersion, l.omega);
    rate += l.kappa * l.kappa / r.v_beta;
  }
  return rate;
}

}  // namespace chiraldecay
