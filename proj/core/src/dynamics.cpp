#include "chiraldecay/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "chiraldecay/numerics.hpp"
#include "chiraldecay/parallel.hpp"

namespace chiraldecay {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_times(const std::vector<double>& times) {
  if (times.empty() || times.front() != 0.0)
    throw PreconditionError("time grid must start at t = 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i + 1] > times[i])) throw PreconditionError("time grid must be increasing");
}

bool uniform_step(const std::vector<double>& times, double& dt) {
  if (times.size() < 2) return false;
  dt = times[1] - times[0];
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (std::abs(times[i + 1] - times[i] - dt) > 1e-12 * std::max(1.0, dt)) return false;
  return true;
}

ComplexMatrix generator(const EffectiveHamiltonian& h, double t) {
  ComplexMatrix m = h.entries;
  m *= cplx(0.0, -t);
  return m;
}

}  // namespace

DecayTrace propagate(const EffectiveHamiltonian& h, const std::vector<cplx>& c0,
                     const std::vector<double>& times) {
  if (static_cast<int>(c0.size()) != h.n)
    throw DimensionMismatchError("propagate: c0 size does not match the level count");
  if (std::abs(norm2(c0) - 1.0) > 1e-8)
    throw PreconditionError("propagate: c0 must be normalized");
  check_times(times);

  DecayTrace trace;
  trace.times = times;
  trace.amplitudes.resize(times.size());
  trace.survival.resize(times.size());

  double dt = 0.0;
  if (uniform_step(times, dt)) {
    const ComplexMatrix step = numerics::expm(generator(h, dt));
    std::vector<cplx> c = c0;
    for (size_t k = 0; k < times.size(); ++k) {
      if (k > 0) c = step.apply(c);
      trace.amplitudes[k] = c;
      trace.survival[k] = norm2(c) * norm2(c);
    }
  } else {
    for (size_t k = 0; k < times.size(); ++k) {
      const std::vector<cplx> c =
          (times[k] == 0.0) ? c0 : numerics::expm(generator(h, times[k])).apply(c0);
      trace.amplitudes[k] = c;
      trace.survival[k] = norm2(c) * norm2(c);
    }
  }
  return trace;
}

QuiescenceResult sigma_max_curve(const EffectiveHamiltonian& h, const std::vector<double>& times,
                                 std::optional<int> state_index) {
  check_times(times);
  const size_t m = times.size();
  QuiescenceResult out;
  out.times = times;
  out.sigma_curve.resize(m);

  std::vector<ComplexMatrix> props(m);
  double dt = 0.0;
  if (uniform_step(times, dt)) {
    const ComplexMatrix step = numerics::expm(generator(h, dt));
    props[0] = ComplexMatrix::identity(h.n);
    for (size_t k = 1; k < m; ++k) props[k] = step * props[k - 1];
  } else {
    for (size_t k = 0; k < m; ++k)
      props[k] = (times[k] == 0.0) ? ComplexMatrix::identity(h.n)
                                   : numerics::expm(generator(h, times[k]));
  }

  const int idx = state_index.value_or(static_cast<int>(m) - 1);
  if (idx < 0 || idx >= static_cast<int>(m))
    throw PreconditionError("sigma_max_curve: state index outside the grid");
  std::vector<std::vector<cplx>> vecs(m);
  parallel_for(static_cast<int>(m), [&](int k) {
    auto r = numerics::largest_singular(props[k]);
    out.sigma_curve[k] = r.sigma;
    if (k == idx) vecs[k] = std::move(r.vector);
  });
  out.optimal_state = vecs[idx];
  return out;
}

namespace {

double sigma_at(const EffectiveHamiltonian& h, double t) {
  if (t == 0.0) return 1.0;
  return numerics::largest_singular(numerics::expm(generator(h, t))).sigma;
}

// Resolve a bracketing [lo, hi] with sigma(lo) >= p_b > sigma(hi) down to
// resolution; ties at exactly p_b move toward larger t.
double bisect_crossing(const EffectiveHamiltonian& h, double p_b, double lo, double hi,
                       double resolution) {
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    if (sigma_at(h, mid) >= p_b)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ResilienceScan resilience_times(const EffectiveHamiltonian& h, const std::vector<double>& p_bs,
                                double t_max, double dt) {
  if (p_bs.empty()) throw PreconditionError("resilience_times: need at least one p_b");
  for (double p : p_bs)
    if (!(p > 0.0 && p < 1.0)) throw PreconditionError("resilience_times: p_b must be in (0,1)");
  if (!(dt > 0.0) || dt > t_max / 200.0)
    throw PreconditionError("resilience_times: need 0 < dt <= t_max/200");

  const double p_min = *std::min_element(p_bs.begin(), p_bs.end());
  const ComplexMatrix step = numerics::expm(generator(h, dt));
  ComplexMatrix prop = ComplexMatrix::identity(h.n);

  std::vector<double> ts{0.0}, sigmas{1.0};
  double t = 0.0;
  while (t < t_max && sigmas.back() >= p_min) {
    t += dt;
    prop = step * prop;
    ts.push_back(t);
    sigmas.push_back(numerics::largest_singular(prop).sigma);
  }

  ResilienceScan scan;
  scan.taus.resize(p_bs.size());
  scan.no_crossing.resize(p_bs.size());
  for (size_t i = 0; i < p_bs.size(); ++i) {
    size_t cross = 0;
    for (size_t k = 1; k < sigmas.size(); ++k) {
      if (sigmas[k] < p_bs[i]) {
        cross = k;
        break;
      }
    }
    if (cross == 0) {
      scan.taus[i] = t_max;
      scan.no_crossing[i] = true;
      continue;
    }
    scan.no_crossing[i] = false;
    scan.taus[i] = bisect_crossing(h, p_bs[i], ts[cross - 1], ts[cross], dt / 100.0);
  }
  return scan;
}

QuiescenceResult quiescence_time(const EffectiveHamiltonian& h, double p_b, double t_max,
                                 double dt) {
  if (!(p_b > 0.0 && p_b < 1.0))
    throw PreconditionError("quiescence_time: p_b must be in (0,1)");
  if (!(dt > 0.0) || dt > t_max / 200.0)
    throw PreconditionError("quiescence_time: need 0 < dt <= t_max/200");

  QuiescenceResult out;
  out.p_b = p_b;

  const ComplexMatrix step = numerics::expm(generator(h, dt));
  ComplexMatrix prop = ComplexMatrix::identity(h.n);
  out.times.push_back(0.0);
  out.sigma_curve.push_back(1.0);
  double t = 0.0;
  size_t cross = 0;
  while (t < t_max) {
    t += dt;
    prop = step * prop;
    out.times.push_back(t);
    out.sigma_curve.push_back(numerics::largest_singular(prop).sigma);
    if (out.sigma_curve.back() < p_b) {
      cross = out.times.size() - 1;
      break;
    }
  }
  if (cross == 0) {
    out.no_crossing = true;
    out.tau = t_max;
    out.optimal_state =
        numerics::largest_singular(numerics::expm(generator(h, t_max))).vector;
    return out;
  }
  const double tau =
      bisect_crossing(h, p_b, out.times[cross - 1], out.times[cross], dt / 100.0);
  out.tau = tau;
  out.optimal_state = numerics::largest_singular(numerics::expm(generator(h, tau))).vector;
  return out;
}

EffectiveHamiltonian degenerate_chain_hamiltonian(int n, double delta) {
  std::vector<Level> levels;
  levels.reserve(n);
  const double kappa = std::sqrt(2.0 * delta);
  for (int i = 0; i < n; ++i) levels.push_back({0.0, kappa, i});
  return build_unidirectional(LevelChain(std::move(levels)), ChiralLinear{1.0, 0.0});
}

BlochResult bloch_scenario(int n, double c_gradient, double delta, const std::vector<cplx>& c0,
                           const std::vector<double>& times) {
  if (n < 1) throw PreconditionError("bloch_scenario: need n >= 1");
  if (!(c_gradient > 0.0)) throw PreconditionError("bloch_scenario: gradient must be > 0");
  if (!(delta > 0.0)) throw PreconditionError("bloch_scenario: delta must be > 0");

  // band wide enough to embed the whole ladder, with constant group velocity
  const double span = c_gradient * (n - 1);
  const double v = 1.0 + span / kPi;
  const double omega0 = 0.5 * span;  // center the band on the ladder
  const double kappa = std::sqrt(2.0 * v * delta);

  std::vector<Level> levels;
  levels.reserve(n);
  for (int a = 0; a < n; ++a) levels.push_back({c_gradient * a, kappa, a});
  BlochResult out;
  out.hamiltonian = build_unidirectional(LevelChain(std::move(levels)), ChiralLinear{v, omega0});
  out.t_b = 2.0 * kPi / c_gradient;
  out.eigs.resize(n);
  for (int a = 0; a < n; ++a) out.eigs[a] = out.hamiltonian.entries(a, a);
  out.trace = propagate(out.hamiltonian, c0, times);
  return out;
}

}  // namespace chiraldecay
