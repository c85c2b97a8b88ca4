#include "chiraldecay/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "chiraldecay/numerics.hpp"

namespace chiraldecay {

namespace {
constexpr double kPi = 3.14159265358979323846;

cplx int_power(cplx z, int p) {
  cplx r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

// i^p, exact
cplx unit_i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct SortedChain {
  std::vector<Level> levels;
  std::vector<int> perm;
};

SortedChain sort_by_site(const LevelChain& chain) {
  SortedChain out;
  out.perm.resize(chain.size());
  std::iota(out.perm.begin(), out.perm.end(), 0);
  std::sort(out.perm.begin(), out.perm.end(), [&](int a, int b) {
    return chain.levels()[a].site < chain.levels()[b].site;
  });
  out.levels.reserve(chain.size());
  for (int idx : out.perm) out.levels.push_back(chain.levels()[idx]);
  return out;
}

}  // namespace

LevelChain::LevelChain(std::vector<Level> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InvalidChainError("LevelChain: need at least one level");
  std::set<int> sites;
  for (const auto& l : levels_) {
    if (l.kappa < 0.0) throw InvalidChainError("LevelChain: kappa must be >= 0");
    if (!sites.insert(l.site).second)
      throw DuplicateSiteError("LevelChain: two levels attached to the same site");
  }
}

EffectiveHamiltonian build_unidirectional(const LevelChain& chain,
                                          const Dispersion& dispersion) {
  if (!is_chiral(dispersion))
    throw MultipleRootsError("build_unidirectional: dispersion must be chiral");
  auto [levels, perm] = sort_by_site(chain);
  const int n = static_cast<int>(levels.size());

  EffectiveHamiltonian h;
  h.n = n;
  h.kind = BathKind::unidirectional;
  h.sorted_levels = levels;
  h.permutation = std::move(perm);
  h.resonance_meta.reserve(n);
  for (const auto& l : levels) h.resonance_meta.push_back(solve_resonance(dispersion, l.omega));

  h.entries = ComplexMatrix(n, n);
  for (int b = 0; b < n; ++b) {
    const auto& res = h.resonance_meta[b];
    const auto& lb = levels[b];
    h.entries(b, b) = cplx(lb.omega, -lb.kappa * lb.kappa / (2.0 * res.v_beta));
    for (int a = b + 1; a < n; ++a) {  // rows below: n_a > n_b after sorting
      const auto& la = levels[a];
      const double amp = la.kappa * lb.kappa / res.v_beta;
      const double phase = res.k_beta * (la.site - lb.site);
      h.entries(a, b) = -cplx(0.0, 1.0) * amp * std::exp(cplx(0.0, phase));
    }
  }
  return h;
}

EffectiveHamiltonian build_bidirectional(const LevelChain& chain, double kappa_hop) {
  if (!(kappa_hop > 0.0)) throw PreconditionError("build_bidirectional: kappa_hop must be > 0");
  for (const auto& l : chain.levels())
    if (!(std::abs(l.omega) < 2.0 * kappa_hop))
      throw OutOfBandError("build_bidirectional: |omega| >= 2 kappa_hop (outside the band)");
  auto [levels, perm] = sort_by_site(chain);
  const int n = static_cast<int>(levels.size());

  EffectiveHamiltonian h;
  h.n = n;
  h.kind = BathKind::bidirectional;
  h.sorted_levels = levels;
  h.permutation = std::move(perm);
  h.entries = ComplexMatrix(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto& la = levels[a];
      const auto& lb = levels[b];
      const int d = std::abs(la.site - lb.site);
      const double root = std::sqrt(4.0 * kappa_hop * kappa_hop - lb.omega * lb.omega);
      const cplx num = int_power(cplx(root, lb.omega), d);
      const double den = std::pow(2.0 * kappa_hop, d) * root;
      cplx entry = -cplx(0.0, 1.0) * la.kappa * lb.kappa * unit_i_power(d) * num / den;
      if (a == b) entry += la.omega;
      h.entries(a, b) = entry;
    }
  }
  return h;
}

ComplexMatrix markov_delta_closed_form(const LevelChain& chain, const Dispersion& dispersion) {
  auto [levels, perm] = sort_by_site(chain);
  const int n = static_cast<int>(levels.size());
  ComplexMatrix delta(n, n);
  for (int b = 0; b < n; ++b) {
    const Resonance res = solve_resonance(dispersion, levels[b].omega);
    delta(b, b) = levels[b].kappa * levels[b].kappa / (2.0 * res.v_beta);
    for (int a = b + 1; a < n; ++a) {
      const double amp = levels[a].kappa * levels[b].kappa / res.v_beta;
      const double phase = res.k_beta * (levels[a].site - levels[b].site);
      delta(a, b) = amp * std::exp(cplx(0.0, phase));
    }
  }
  return delta;
}

namespace {

// PV integral of e^{i u d}/u over pv_exclusion < |u| <= half_width, midpoint
// rule with symmetric point placement (pairwise cancellation handles the
// pole).
cplx pv_kernel(int d, double half_width, int points, double pv_exclusion) {
  const double h = 2.0 * half_width / points;
  const int pairs = points / 2;
  cplx acc = 0.0;
  for (int j = pairs - 1; j >= 0; --j) {  // outer tail first: small terms accumulate last
    const double u = (j + 0.5) * h;
    if (u <= pv_exclusion) continue;
    acc += (std::exp(cplx(0.0, u * d)) - std::exp(cplx(0.0, -u * d))) / u;
  }
  return acc * h;
}

}  // namespace

ComplexMatrix delta_numeric(const LevelChain& chain, const Dispersion& dispersion,
                            const QuadratureSpec& quad) {
  if (quad.grid_points < 1024)
    throw PreconditionError("delta_numeric: grid_points must be >= 1024");
  if (!is_chiral(dispersion))
    throw MultipleRootsError("delta_numeric: dispersion must be chiral");
  const double excl = quad.pv_exclusion >= 0.0 ? quad.pv_exclusion
                                               : 2.0 * kPi / quad.grid_points;
  const double half_width = 32.0 * kPi;  // linearized band extends past the BZ

  auto [levels, perm] = sort_by_site(chain);
  const int n = static_cast<int>(levels.size());
  ComplexMatrix delta(n, n), coarse(n, n);
  double pv_scale = 0.0;
  for (int b = 0; b < n; ++b) {
    const Resonance res = solve_resonance(dispersion, levels[b].omega);
    for (int a = 0; a < n; ++a) {
      const double kk = levels[a].kappa * levels[b].kappa;
      const int d = levels[a].site - levels[b].site;
      const cplx pole_phase = std::exp(cplx(0.0, res.k_beta * d));
      const cplx on_shell = 0.5 * kk * pole_phase / res.v_beta;
      const cplx pv1 = pv_kernel(d, half_width, quad.grid_points, excl);
      const cplx pv2 = pv_kernel(d, half_width, 2 * quad.grid_points, excl);
      const cplx pref = -cplx(0.0, 1.0) * kk * pole_phase / (2.0 * kPi * res.v_beta);
      coarse(a, b) = on_shell + pref * pv1;
      delta(a, b) = on_shell + pref * pv2;
      pv_scale = std::max(pv_scale, kk * kPi / res.v_beta);
    }
  }
  double drift = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) drift = std::max(drift, std::abs(delta(i, j) - coarse(i, j)));
  if (pv_scale > 0.0 && drift / pv_scale > 1e-3)
    throw QuadratureDivergenceError(
        "delta_numeric: PV quadrature failed the 2x-refinement self-consistency check");
  return delta;
}

std::vector<cplx> find_bound_states(const EffectiveHamiltonian& h, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("find_bound_states: tol must be > 0");
  numerics::EigvalsResult r;
  try {
    r = numerics::eigvals(h.entries);
  } catch (const NoConvergenceError& e) {
    throw NumericalFailureError(std::string("find_bound_states: ") + e.what());
  }
  std::vector<cplx> out;
  for (const auto& ev : r.values)
    if (std::abs(ev.imag()) <= tol) out.push_back(ev);
  return out;
}

}  // namespace chiraldecay
