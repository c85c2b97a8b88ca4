#include "chiraldecay/baths/floquet.hpp"

#include <cmath>
#include <set>

namespace chiraldecay::baths {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

FloquetCycle::FloquetCycle(double t1, double t2, double kappa_bath, std::vector<double> rho,
                           std::vector<int> sites)
    : t1_(t1), t2_(t2), kappa_(kappa_bath), rho_(std::move(rho)), sites_(std::move(sites)) {
  if (!(t1_ > 0.0) || !(t2_ > 0.0))
    throw PreconditionError("FloquetCycle: step durations must be positive");
  if (std::abs(kappa_ * t1_ - kPi / 2.0) > 1e-12)
    throw PreconditionError("FloquetCycle: kappa_bath * t1 must equal pi/2 (full swap pulses)");
  if (rho_.size() != sites_.size())
    throw DimensionMismatchError("FloquetCycle: rho and sites must pair up");
  std::set<int> seen;
  for (int s : sites_)
    if (!seen.insert(s).second)
      throw DuplicateSiteError("FloquetCycle: two levels on the same A site");
}

FloquetCycle FloquetCycle::make(double t1, double t2, std::vector<double> rho,
                                std::vector<int> sites) {
  return FloquetCycle(t1, t2, kPi / (2.0 * t1), std::move(rho), std::move(sites));
}

void floquet_apply_cycle(const FloquetCycle& cycle, const std::vector<double>& omega_levels,
                         BinaryLatticeState& state) {
  const int cells = static_cast<int>(state.a.size());
  if (state.b.size() != state.a.size())
    throw DimensionMismatchError("floquet_apply_cycle: sublattices must have equal size");
  if (static_cast<int>(state.levels.size()) != cycle.levels() ||
      static_cast<int>(omega_levels.size()) != cycle.levels())
    throw DimensionMismatchError("floquet_apply_cycle: level count mismatch");

  // step 1: (A_j, B_j) full swap, amplitude -i each way
  for (int j = 0; j < cells; ++j) {
    const cplx a = state.a[j], b = state.b[j];
    state.a[j] = -cplx(0, 1) * b;
    state.b[j] = -cplx(0, 1) * a;
  }
  // step 2: (B_j, A_{j+1}) full swap
  for (int j = 0; j < cells - 1; ++j) {
    const cplx b = state.b[j], a = state.a[j + 1];
    state.b[j] = -cplx(0, 1) * a;
    state.a[j + 1] = -cplx(0, 1) * b;
  }
  // step 3: each (level, A-site) pair evolves under [[omega, rho], [rho, 0]]
  // for t2; closed-form Rabi rotation
  for (int l = 0; l < cycle.levels(); ++l) {
    const int site = cycle.sites()[l];
    if (site < 0 || site >= cells)
      throw PreconditionError("floquet_apply_cycle: attachment outside the lattice");
    const double om = omega_levels[l], rho = cycle.rho()[l], t = cycle.t2();
    const double half = 0.5 * om;
    const double rabi = std::hypot(half, rho);
    const cplx ph = std::exp(-cplx(0, 1) * half * t);
    cplx u00, u01, u10, u11;
    if (rabi == 0.0) {
      u00 = u11 = ph;
      u01 = u10 = 0.0;
    } else {
      const double c = std::cos(rabi * t), s = std::sin(rabi * t) / rabi;
      u00 = ph * cplx(c, -half * s);
      u11 = ph * cplx(c, half * s);
      u01 = u10 = ph * (-cplx(0, 1) * rho * s);
    }
    const cplx cl = state.levels[l], ca = state.a[site];
    state.levels[l] = u00 * cl + u01 * ca;
    state.a[site] = u10 * cl + u11 * ca;
  }
}

ExactTrace floquet_cycle_evolve(const FloquetCycle& cycle, int lattice_size,
                                const std::vector<double>& omega_levels,
                                const std::vector<cplx>& c0, int n_cycles) {
  if (lattice_size % 2 != 0 || lattice_size < 2 * n_cycles + 4)
    throw PreconditionError(
        "floquet_cycle_evolve: lattice_size must be even and >= 2 n_cycles + 4");
  if (static_cast<int>(c0.size()) != cycle.levels())
    throw DimensionMismatchError("floquet_cycle_evolve: c0 size != level count");
  {
    double n0 = 0.0;
    for (const auto& v : c0) n0 += std::norm(v);
    if (std::abs(n0 - 1.0) > 1e-8)
      throw PreconditionError("floquet_cycle_evolve: c0 must be normalized");
  }
  // room on both sides: levels in the middle would waste downstream range, so
  // keep attachments in the first third but away from the left end
  BinaryLatticeState st;
  st.a.assign(lattice_size, 0.0);
  st.b.assign(lattice_size, 0.0);
  st.levels = c0;

  ExactTrace out;
  const double T = cycle.period();
  const int nlev = cycle.levels();
  auto record = [&](int cyc) {
    out.times.push_back(cyc * T);
    std::vector<double> occ(nlev);
    for (int a = 0; a < nlev; ++a) occ[a] = std::norm(st.levels[a]);
    out.level_amplitudes.push_back(st.levels);
    out.level_occupations.push_back(std::move(occ));
    double norm = 0.0;
    for (const auto& v : st.a) norm += std::norm(v);
    for (const auto& v : st.b) norm += std::norm(v);
    for (const auto& v : st.levels) norm += std::norm(v);
    out.norm_drift = std::max(out.norm_drift, std::abs(norm - 1.0));
    const double ends = std::norm(st.a.front()) + std::norm(st.a.back()) +
                        std::norm(st.b.front()) + std::norm(st.b.back());
    if (ends > 1e-8)
      throw WraparoundError("floquet_cycle_evolve: excitation reached the lattice ends");
  };

  record(0);
  for (int cyc = 1; cyc <= n_cycles; ++cyc) {
    floquet_apply_cycle(cycle, omega_levels, st);
    record(cyc);
  }

  out.final_state.bath_amplitudes.reserve(2 * lattice_size);
  out.final_state.bath_amplitudes.insert(out.final_state.bath_amplitudes.end(), st.a.begin(),
                                         st.a.end());
  out.final_state.bath_amplitudes.insert(out.final_state.bath_amplitudes.end(), st.b.begin(),
                                         st.b.end());
  out.final_state.level_amplitudes = st.levels;
  out.final_state.geometry = ChainGeometry{2 * lattice_size};
  out.final_state.time = n_cycles * T;
  return out;
}

EffectiveHamiltonian floquet_effective(const FloquetCycle& cycle,
                                       const std::vector<double>& omega_levels) {
  if (static_cast<int>(omega_levels.size()) != cycle.levels())
    throw DimensionMismatchError("floquet_effective: omega count != level count");
  const double T = cycle.period();
  std::vector<Level> levels;
  levels.reserve(cycle.levels());
  double kmax = 0.0;
  for (int a = 0; a < cycle.levels(); ++a) {
    const double kappa_eff = (cycle.t2() / T) * cycle.rho()[a];
    levels.push_back({omega_levels[a], kappa_eff, cycle.sites()[a]});
    kmax = std::max(kmax, kappa_eff);
  }
  EffectiveHamiltonian h =
      build_unidirectional(LevelChain(std::move(levels)), FloquetSawtooth{T});
  // leading BCH correction ~ (T/2) |omega_a - omega(k)| g_a(k); detunings are
  // bounded by half the Floquet zone, pi/T
  h.commutator_estimate = 0.5 * T * kmax * (kPi / T);
  return h;
}

}  // namespace chiraldecay::baths
