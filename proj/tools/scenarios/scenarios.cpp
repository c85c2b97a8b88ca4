#include "scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "chiraldecay/baths/floquet.hpp"
#include "chiraldecay/baths/harper.hpp"
#include "chiraldecay/baths/metacrystal.hpp"
#include "chiraldecay/dynamics.hpp"
#include "chiraldecay/manybody.hpp"
#include "chiraldecay/numerics.hpp"
#include "chiraldecay/parallel.hpp"
#include "csv.hpp"
#include "svg.hpp"

namespace chiraldecay::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::vector<double> uniform_grid(double t_max, int steps) {
  std::vector<double> t(steps + 1);
  for (int i = 0; i <= steps; ++i) t[i] = t_max * i / steps;
  t[0] = 0.0;
  return t;
}

std::vector<double> bz_grid(int points) {
  std::vector<double> ks(points);
  for (int i = 0; i < points; ++i) ks[i] = -kPi + 2.0 * kPi * i / points;
  return ks;
}

double fit_log_slope(const std::vector<double>& t, const std::vector<double>& p,
                     double floor = 1e-14) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (p[i] < floor) continue;
    const double y = std::log(p[i]);
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_trace_csv(const std::filesystem::path& dir, const std::vector<double>& times,
                     const std::vector<std::vector<cplx>>& amps) {
  const int n = amps.empty() ? 0 : static_cast<int>(amps[0].size());
  std::vector<std::string> cols{"t"};
  for (int a = 1; a <= n; ++a) {
    cols.push_back("re_c" + std::to_string(a));
    cols.push_back("im_c" + std::to_string(a));
  }
  cols.push_back("survival");
  CsvWriter csv(dir / "trace.csv", cols);
  for (size_t k = 0; k < times.size(); ++k) {
    std::vector<double> row{times[k]};
    double surv = 0.0;
    for (int a = 0; a < n; ++a) {
      row.push_back(amps[k][a].real());
      row.push_back(amps[k][a].imag());
      surv += std::norm(amps[k][a]);
    }
    row.push_back(surv);
    csv.row(row);
  }
  csv.close();
}

void write_trace_svg(const std::filesystem::path& dir, const std::vector<double>& times,
                     const std::vector<std::vector<cplx>>& amps, bool log_y) {
  const int n = amps.empty() ? 0 : static_cast<int>(amps[0].size());
  std::vector<SvgSeries> series;
  SvgSeries surv{"P(t)", "black", times, {}, false};
  for (size_t k = 0; k < times.size(); ++k) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += std::norm(amps[k][a]);
    surv.y.push_back(s);
  }
  series.push_back(std::move(surv));
  for (int a = 0; a < n && a < 6; ++a) {
    SvgSeries s{"|c" + std::to_string(a + 1) + "|^2", kPalette[a % 8], times, {}, false};
    for (size_t k = 0; k < times.size(); ++k) s.y.push_back(std::norm(amps[k][a]));
    series.push_back(std::move(s));
  }
  write_line_plot(dir / "trace.svg", {"level occupations", "t", "occupation", log_y}, series);
}

void write_eigs_csv(const std::filesystem::path& dir, const std::vector<cplx>& eigs) {
  CsvWriter csv(dir / "eigs.csv", {"re", "im"});
  for (const auto& e : eigs) csv.row({e.real(), e.imag()});
  csv.close();
}

void write_dispersion_csv(const std::filesystem::path& dir, const std::vector<double>& ks,
                          const std::vector<double>& ws, const std::vector<double>& vs) {
  CsvWriter csv(dir / "dispersion.csv", {"k", "omega", "v"});
  for (size_t i = 0; i < ks.size(); ++i) csv.row({ks[i], ws[i], vs[i]});
  csv.close();
}

void write_dispersion_svg(const std::filesystem::path& dir, const std::vector<double>& ks,
                          const std::vector<double>& ws) {
  write_line_plot(dir / "dispersion.svg", {"bath dispersion", "k", "omega", false},
                  {{"omega(k)", kPalette[0], ks, ws, false}});
}

struct BuiltModel {
  EffectiveHamiltonian h;
  Dispersion dispersion = CosineBand{1.0};
  bool has_dispersion = false;
};

LevelChain make_uniform_chain(int n, double omega, double kappa, int spacing) {
  std::vector<Level> levels;
  levels.reserve(n);
  for (int a = 0; a < n; ++a) levels.push_back({omega, kappa, a * spacing});
  return LevelChain(std::move(levels));
}

BuiltModel build_effective(const EffectiveParams& p) {
  if (p.n < 1) throw PreconditionError("effective: n must be >= 1");
  if (p.spacing < 1) throw PreconditionError("effective: spacing must be >= 1");
  BuiltModel out;
  const LevelChain chain = make_uniform_chain(p.n, p.omega, p.kappa, p.spacing);
  if (p.kind == "unidirectional") {
    out.dispersion = ChiralLinear{p.v, p.omega - p.v * p.k_beta};
    out.has_dispersion = true;
    out.h = build_unidirectional(chain, out.dispersion);
  } else if (p.kind == "bidirectional") {
    out.dispersion = CosineBand{p.kappa_hop};
    out.has_dispersion = true;
    out.h = build_bidirectional(chain, p.kappa_hop);
  } else {
    throw PreconditionError("effective: kind must be unidirectional or bidirectional");
  }
  return out;
}

void emit_dispersion(const std::filesystem::path& dir, const Dispersion& d, bool emit_svg) {
  const auto ks = bz_grid(361);
  std::vector<double> ws(ks.size()), vs(ks.size());
  for (size_t i = 0; i < ks.size(); ++i) {
    ws[i] = omega_at(d, ks[i]);
    const double h = 1e-6;
    const double kp = std::min(ks[i] + h, kPi - 1e-12);
    const double km = std::max(ks[i] - h, -kPi);
    vs[i] = (omega_at(d, kp) - omega_at(d, km)) / (kp - km);
  }
  write_dispersion_csv(dir, ks, ws, vs);
  if (emit_svg) write_dispersion_svg(dir, ks, ws);
}

std::vector<cplx> basis_state(int n, int idx) {
  std::vector<cplx> c(n, 0.0);
  c[idx] = 1.0;
  return c;
}

void run_effective(const EffectiveParams& p, const CommonOptions& common) {
  const BuiltModel model = build_effective(p);
  const auto ev = numerics::eigvals(model.h.entries);
  write_eigs_csv(common.output_dir, ev.values);
  emit_dispersion(common.output_dir, model.dispersion, common.emit_svg);
  const auto trace =
      propagate(model.h, basis_state(p.n, 0), uniform_grid(p.t_max, p.steps));
  write_trace_csv(common.output_dir, trace.times, trace.amplitudes);
  if (common.emit_svg) write_trace_svg(common.output_dir, trace.times, trace.amplitudes, true);
  double slowest = 1e300;
  int bics = 0;
  for (const auto& e : ev.values) {
    slowest = std::min(slowest, -2.0 * e.imag());
    if (std::abs(e.imag()) <= 1e-9) ++bics;
  }
  std::printf("effective %s N=%d: slowest decay rate %.6g, bound states (|Im|<=1e-9): %d\n",
              p.kind.c_str(), p.n, slowest, bics);
}

void run_decay(const DecayParams& p, const CommonOptions& common) {
  const BuiltModel model = build_effective(p.model);
  if (p.excite < 1 || p.excite > p.model.n)
    throw PreconditionError("decay: excite must be in 1..n");
  const auto grid = uniform_grid(p.model.t_max, p.model.steps);
  const auto trace = propagate(model.h, basis_state(p.model.n, p.excite - 1), grid);
  write_trace_csv(common.output_dir, trace.times, trace.amplitudes);
  if (common.emit_svg) write_trace_svg(common.output_dir, trace.times, trace.amplitudes, true);
  write_eigs_csv(common.output_dir, numerics::eigvals(model.h.entries).values);
  const double rate = -fit_log_slope(trace.times, trace.survival);
  std::printf("decay N=%d from level %d: fitted survival rate %.6g\n", p.model.n, p.excite,
              rate);
}

void run_quiescence(const QuiescenceParams& p, const CommonOptions& common) {
  if (p.n < 1) throw PreconditionError("quiescence: n must be >= 1");
  const auto h = degenerate_chain_hamiltonian(p.n, 1.0);
  const auto q = quiescence_time(h, p.p_b, p.t_max, p.dt);

  CsvWriter sig(common.output_dir / "sigma_max.csv", {"t", "sigma_max"});
  for (size_t k = 0; k < q.times.size(); ++k) sig.row({q.times[k], q.sigma_curve[k]});
  sig.close();
  if (common.emit_svg)
    write_line_plot(common.output_dir / "sigma_max.svg",
                    {"survival upper bound", "t", "sigma_max", false},
                    {{"sigma_max(t)", kPalette[0], q.times, q.sigma_curve, false}});

  // trace launched from the optimal (quiescent) preparation
  const double horizon = std::min(p.t_max, 1.5 * *q.tau + 5.0 * p.dt);
  const auto trace = propagate(h, q.optimal_state, uniform_grid(horizon, 300));
  write_trace_csv(common.output_dir, trace.times, trace.amplitudes);
  if (common.emit_svg) write_trace_svg(common.output_dir, trace.times, trace.amplitudes, false);

  if (p.sweep) {
    const std::vector<double> pbs{0.996, 0.97, 0.5};
    const int n_lo = std::min(4, p.n), n_hi = p.n;
    std::vector<std::array<double, 3>> taus(n_hi - n_lo + 1);
    parallel_for(n_hi - n_lo + 1, [&](int i) {
      const auto hn = degenerate_chain_hamiltonian(n_lo + i, 1.0);
      const auto scan = resilience_times(hn, pbs, p.t_max, p.dt);
      taus[i] = {scan.taus[0], scan.taus[1], scan.taus[2]};
    });
    CsvWriter tv(common.output_dir / "tau_vs_n.csv", {"n", "tau_pb0996", "tau_pb097", "tau_pb05"});
    for (int i = 0; i < static_cast<int>(taus.size()); ++i)
      tv.row({static_cast<double>(n_lo + i), taus[i][0], taus[i][1], taus[i][2]});
    tv.close();
    if (common.emit_svg) {
      std::vector<double> ns(taus.size());
      std::vector<double> t0(taus.size()), t1(taus.size()), t2(taus.size());
      for (size_t i = 0; i < taus.size(); ++i) {
        ns[i] = n_lo + static_cast<int>(i);
        t0[i] = taus[i][0];
        t1[i] = taus[i][1];
        t2[i] = taus[i][2];
      }
      write_line_plot(common.output_dir / "tau_vs_n.svg",
                      {"resilience time vs level count", "N", "tau", false},
                      {{"P_b=0.996", kPalette[0], ns, t0, true},
                       {"P_b=0.97", kPalette[1], ns, t1, true},
                       {"P_b=0.5", kPalette[2], ns, t2, true}});
    }
  }
  if (q.no_crossing)
    std::printf("quiescence N=%d: sigma_max stayed above P_b=%.6g up to t_max=%.6g "
                "(tau >= t_max)\n",
                p.n, p.p_b, p.t_max);
  else
    std::printf("quiescence N=%d: tau = %.6g at P_b = %.6g\n", p.n, *q.tau, p.p_b);
}

void run_bloch(const BlochParams& p, const CommonOptions& common) {
  const double c_gradient = p.c_over_delta * p.delta;
  const double tb = 2.0 * kPi / c_gradient;
  const auto grid = uniform_grid(p.periods * tb, p.steps);
  const auto res = bloch_scenario(p.n, c_gradient, p.delta, basis_state(p.n, 0), grid);
  write_trace_csv(common.output_dir, res.trace.times, res.trace.amplitudes);
  if (common.emit_svg)
    write_trace_svg(common.output_dir, res.trace.times, res.trace.amplitudes, false);
  write_eigs_csv(common.output_dir, res.eigs);
  std::printf("bloch N=%d, C=%.6g Delta: T_B = %.6g, eigenvalue spacing = %.6g\n", p.n,
              p.c_over_delta, res.t_b, c_gradient);
}

void run_hofstadter(const HofstadterParams& p, const CommonOptions& common) {
  const double phi = p.phi_over_pi * kPi;
  const auto edge = baths::harper_edge_modes(phi, p.kappa, p.n_max, bz_grid(p.k_points));
  // branch velocities by centered differences on the samples
  const auto& bk = edge.branch_k;
  const auto& bw = edge.branch_omega;
  std::vector<double> bv(bk.size());
  for (size_t i = 0; i < bk.size(); ++i) {
    const size_t lo = (i == 0) ? 0 : i - 1;
    const size_t hi = (i + 1 == bk.size()) ? i : i + 1;
    bv[i] = (bw[hi] - bw[lo]) / (bk[hi] - bk[lo]);
  }
  write_dispersion_csv(common.output_dir, bk, bw, bv);
  if (common.emit_svg) write_dispersion_svg(common.output_dir, bk, bw);

  const Dispersion tab = edge.tabulated();
  const Resonance res = solve_resonance(tab, p.omega);

  const LevelChain chain({{p.omega, p.kappa_level, p.margin},
                          {p.omega, p.kappa_level, p.margin + p.spacing}});
  const auto heff = build_unidirectional(chain, tab);
  write_eigs_csv(common.output_dir, numerics::eigvals(heff.entries).values);

  const int l_m = p.margin + static_cast<int>(2.0 * res.v_beta * p.t_max) + 40;
  const StripGeometry strip{24, l_m};
  const std::vector<baths::StripAttachment> att{
      {1, p.margin, p.kappa_level, p.omega}, {1, p.margin + p.spacing, p.kappa_level, p.omega}};
  const auto grid = uniform_grid(p.t_max, p.samples);
  const auto exact = baths::hofstadter_evolve(phi, p.kappa, strip, att, {1.0, 0.0}, grid, p.dt);
  write_trace_csv(common.output_dir, exact.times, exact.level_amplitudes);

  const auto eff_trace = propagate(heff, {1.0, 0.0}, grid);
  {
    CsvWriter csv(common.output_dir / "trace_effective.csv",
                  {"t", "re_c1", "im_c1", "re_c2", "im_c2", "survival"});
    for (size_t k = 0; k < grid.size(); ++k) {
      const auto& a = eff_trace.amplitudes[k];
      csv.row({grid[k], a[0].real(), a[0].imag(), a[1].real(), a[1].imag(),
               eff_trace.survival[k]});
    }
    csv.close();
  }
  if (common.emit_svg) {
    std::vector<double> ex1, ef1;
    for (size_t k = 0; k < grid.size(); ++k) {
      ex1.push_back(exact.level_occupations[k][0]);
      ef1.push_back(std::norm(eff_trace.amplitudes[k][0]));
    }
    write_line_plot(common.output_dir / "trace.svg",
                    {"exact strip vs effective model", "t", "|c1|^2", false},
                    {{"exact", kPalette[0], grid, ex1, false},
                     {"effective", kPalette[1], grid, ef1, false}});
  }
  std::vector<double> occ1(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) occ1[k] = exact.level_occupations[k][0];
  const double rate = -fit_log_slope(grid, occ1, 1e-8);
  std::printf("hofstadter phi=%.6g pi: k_beta = %.6g, v_beta = %.6g, exact |c1|^2 rate %.6g "
              "(markov %.6g)\n",
              p.phi_over_pi, res.k_beta, res.v_beta, rate,
              p.kappa_level * p.kappa_level / res.v_beta);
}

void run_floquet(const FloquetParams& p, const CommonOptions& common) {
  if (!(p.t1_ratio > 0.0 && p.t1_ratio < 0.5))
    throw PreconditionError("floquet: t1-ratio must lie in (0, 0.5)");
  const double t1 = p.t1_ratio * p.period;
  const double t2 = p.period - 2.0 * t1;
  const double kap = kPi / (2.0 * t1);
  const double rho = p.rho_ratio * kap;
  const int base = 6;
  const auto cycle = baths::FloquetCycle::make(t1, t2, {rho, rho}, {base, base + p.spacing});
  const std::vector<double> omegas{0.0, 0.0};

  const int cells = 2 * p.cycles + 16 + p.spacing;
  const auto exact = baths::floquet_cycle_evolve(cycle, cells, omegas, {1.0, 0.0}, p.cycles);
  write_trace_csv(common.output_dir, exact.times, exact.level_amplitudes);

  const auto heff = baths::floquet_effective(cycle, omegas);
  write_eigs_csv(common.output_dir, numerics::eigvals(heff.entries).values);
  emit_dispersion(common.output_dir, FloquetSawtooth{p.period}, common.emit_svg);

  const auto eff = propagate(heff, {1.0, 0.0}, exact.times);
  if (common.emit_svg) {
    std::vector<double> ex1, ef1;
    for (size_t k = 0; k < exact.times.size(); ++k) {
      ex1.push_back(exact.level_occupations[k][0]);
      ef1.push_back(std::norm(eff.amplitudes[k][0]));
    }
    write_line_plot(common.output_dir / "trace.svg",
                    {"stroboscopic decay vs effective model", "t", "|c1|^2", false},
                    {{"exact (stroboscopic)", kPalette[0], exact.times, ex1, true},
                     {"effective", kPalette[1], exact.times, ef1, false}});
  }
  std::vector<double> occ1(exact.times.size());
  for (size_t k = 0; k < exact.times.size(); ++k) occ1[k] = exact.level_occupations[k][0];
  const double fitted = -fit_log_slope(exact.times, occ1, 1e-8);
  std::printf("floquet T=%.6g: Delta_eff = %.6g, fitted stroboscopic rate %.6g (2 Delta = %.6g)\n",
              p.period, -heff.entries(0, 0).imag(), fitted, -2.0 * heff.entries(0, 0).imag());
}

void run_manybody(const ManybodyParams& p, const CommonOptions& common) {
  EffectiveParams ep;
  ep.n = p.n;
  ep.omega = 0.0;
  ep.kappa = p.kappa;
  ep.spacing = p.spacing;
  ep.v = p.v;
  ep.k_beta = 0.0;
  ep.kind = p.kind;
  ep.kappa_hop = p.kappa_hop;
  const BuiltModel model = build_effective(ep);

  const auto grid = uniform_grid(p.t_max, p.steps);
  CsvWriter csv(common.output_dir / "manybody.csv", {"t", "p_fermi", "p_bose"});
  std::vector<double> pf(grid.size()), pb(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) {
    pf[k] = nondecay_probability(model.h, grid[k], StatisticsKind::fermion);
    pb[k] = nondecay_probability(model.h, grid[k], StatisticsKind::boson);
    csv.row({grid[k], pf[k], pb[k]});
  }
  csv.close();
  if (common.emit_svg)
    write_line_plot(common.output_dir / "manybody.svg",
                    {"many-body non-decay probability", "t", "P(t)", true},
                    {{"fermions", kPalette[0], grid, pf, false},
                     {"bosons", kPalette[1], grid, pb, false}});

  const auto trace = propagate(model.h, basis_state(p.n, 0), grid);
  write_trace_csv(common.output_dir, trace.times, trace.amplitudes);
  if (common.emit_svg) write_trace_svg(common.output_dir, trace.times, trace.amplitudes, true);

  const double fermi_rate = -fit_log_slope(grid, pf);
  if (p.kind == "unidirectional") {
    const LevelChain chain = make_uniform_chain(p.n, 0.0, p.kappa, p.spacing);
    const double rate = chiral_decay_rate(chain, model.dispersion);
    std::printf("manybody N=%d chiral: Delta = sum kappa^2/v = %.6g, fitted fermion rate %.6g, "
                "statistics-blind\n",
                p.n, rate, fermi_rate);
  } else {
    const double bose_rate = -fit_log_slope(grid, pb);
    std::printf("manybody N=%d bidirectional: fitted fermion rate %.6g, boson rate %.6g\n", p.n,
                fermi_rate, bose_rate);
  }
}

void run_verify_markov(const VerifyMarkovParams& p, const CommonOptions& common) {
  const LevelChain chain = make_uniform_chain(p.n, 0.0, p.kappa, p.spacing);
  const Dispersion d = ChiralLinear{p.v, 0.0};
  const auto numeric = delta_numeric(chain, d, {p.grid_points, -1.0});
  const auto closed = markov_delta_closed_form(chain, d);

  CsvWriter csv(common.output_dir / "markov.csv",
                {"alpha", "beta", "re_closed", "im_closed", "re_numeric", "im_numeric",
                 "abs_err"});
  double scale = 0.0, err = 0.0;
  for (int a = 0; a < p.n; ++a)
    for (int b = 0; b < p.n; ++b) scale = std::max(scale, std::abs(closed(a, b)));
  for (int a = 0; a < p.n; ++a) {
    for (int b = 0; b < p.n; ++b) {
      const double e = std::abs(numeric(a, b) - closed(a, b));
      err = std::max(err, e);
      csv.row({static_cast<double>(a + 1), static_cast<double>(b + 1), closed(a, b).real(),
               closed(a, b).imag(), numeric(a, b).real(), numeric(a, b).imag(), e});
    }
  }
  csv.close();

  const auto h = build_unidirectional(chain, d);
  const auto trace = propagate(h, basis_state(p.n, 0), uniform_grid(50.0, 200));
  write_trace_csv(common.output_dir, trace.times, trace.amplitudes);
  if (common.emit_svg) write_trace_svg(common.output_dir, trace.times, trace.amplitudes, true);

  std::printf("verify-markov N=%d: max |quadrature - closed| / max|closed| = %.3e\n", p.n,
              err / scale);
}

}  // namespace

void run(const ScenarioConfig& config) {
  std::filesystem::create_directories(config.common.output_dir);
  std::visit(
      [&](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, EffectiveParams>)
          run_effective(params, config.common);
        else if constexpr (std::is_same_v<T, DecayParams>)
          run_decay(params, config.common);
        else if constexpr (std::is_same_v<T, QuiescenceParams>)
          run_quiescence(params, config.common);
        else if constexpr (std::is_same_v<T, BlochParams>)
          run_bloch(params, config.common);
        else if constexpr (std::is_same_v<T, HofstadterParams>)
          run_hofstadter(params, config.common);
        else if constexpr (std::is_same_v<T, FloquetParams>)
          run_floquet(params, config.common);
        else if constexpr (std::is_same_v<T, ManybodyParams>)
          run_manybody(params, config.common);
        else
          run_verify_markov(params, config.common);
      },
      config.params);
}

}  // namespace chiraldecay::cli
