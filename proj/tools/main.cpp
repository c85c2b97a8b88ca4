#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "chiraldecay/errors.hpp"
#include "chiraldecay/parallel.hpp"
#include "scenarios/scenarios.hpp"

namespace {

using namespace chiraldecay;
using namespace chiraldecay::cli;

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("-o,--output-dir", common.output_dir, "directory for CSV/SVG artifacts")
      ->capture_default_str();
  sub->add_flag("--svg,!--no-svg", common.emit_svg, "emit SVG plots")->capture_default_str();
  // --config is a top-level option; let it (and nothing else) fall through
  sub->fallthrough();
}

void add_effective_options(CLI::App* sub, EffectiveParams& p) {
  sub->add_option("-n,--n", p.n, "number of levels")->capture_default_str();
  sub->add_option("--omega", p.omega, "common level frequency")->capture_default_str();
  sub->add_option("--kappa", p.kappa, "level-bath coupling")->capture_default_str();
  sub->add_option("--spacing", p.spacing, "site spacing between consecutive levels")
      ->capture_default_str();
  sub->add_option("--v", p.v, "chiral group velocity")->capture_default_str();
  sub->add_option("--k-beta", p.k_beta, "Bloch number of the resonance")->capture_default_str();
  sub->add_option("--kind", p.kind, "unidirectional | bidirectional")
      ->check(CLI::IsMember({"unidirectional", "bidirectional"}))
      ->capture_default_str();
  sub->add_option("--kappa-hop", p.kappa_hop, "cosine-band hopping (bidirectional)")
      ->capture_default_str();
  sub->add_option("--t-max", p.t_max, "trace horizon")->capture_default_str();
  sub->add_option("--steps", p.steps, "trace steps")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("CHIRAL_DECAY_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n >= 0) chiraldecay::set_max_workers(static_cast<int>(n));
  }

  CLI::App app{"multilevel quantum decay into chiral and time-reversal-symmetric baths"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file with flat per-scenario tables");
  app.allow_config_extras(CLI::config_extras_mode::error);

  ScenarioConfig config;

  EffectiveParams effective;
  CommonOptions effective_common;
  auto* sub_eff = app.add_subcommand("effective", "build the effective non-Hermitian matrix");
  add_effective_options(sub_eff, effective);
  add_common(sub_eff, effective_common);

  DecayParams decay;
  CommonOptions decay_common;
  auto* sub_decay = app.add_subcommand("decay", "single-particle decay trace");
  add_effective_options(sub_decay, decay.model);
  sub_decay->add_option("--excite", decay.excite, "initially excited level (1-based)")
      ->capture_default_str();
  add_common(sub_decay, decay_common);

  QuiescenceParams quiescence;
  CommonOptions quiescence_common;
  auto* sub_q = app.add_subcommand("quiescence", "sigma_max bound and resilience time");
  sub_q->add_option("-n,--n", quiescence.n, "number of degenerate levels")->capture_default_str();
  sub_q->add_option("--pb", quiescence.p_b, "reference level P_b")->capture_default_str();
  sub_q->add_option("--t-max", quiescence.t_max, "scan horizon")->capture_default_str();
  sub_q->add_option("--dt", quiescence.dt, "scan step (<= t_max/200)")->capture_default_str();
  sub_q->add_flag("--sweep", quiescence.sweep, "also compute tau(N) for N = 4..n")
      ->capture_default_str();
  add_common(sub_q, quiescence_common);

  BlochParams bloch;
  CommonOptions bloch_common;
  auto* sub_b = app.add_subcommand("bloch", "damped Bloch oscillations of a level ladder");
  sub_b->add_option("-n,--n", bloch.n, "number of levels")->capture_default_str();
  sub_b->add_option("--c-over-delta", bloch.c_over_delta, "gradient C in units of Delta")
      ->capture_default_str();
  sub_b->add_option("--delta", bloch.delta, "common decay rate Delta")->capture_default_str();
  sub_b->add_option("--periods", bloch.periods, "trace length in Bloch periods")
      ->capture_default_str();
  sub_b->add_option("--steps", bloch.steps, "trace steps")->capture_default_str();
  add_common(sub_b, bloch_common);

  HofstadterParams hofstadter;
  CommonOptions hofstadter_common;
  auto* sub_h = app.add_subcommand("hofstadter", "exact quantum Hall strip vs effective model");
  sub_h->add_option("--phi-over-pi", hofstadter.phi_over_pi, "flux per plaquette / pi")
      ->capture_default_str();
  sub_h->add_option("--kappa", hofstadter.kappa, "lattice hopping")->capture_default_str();
  sub_h->add_option("--kappa-level", hofstadter.kappa_level, "level-lattice coupling")
      ->capture_default_str();
  sub_h->add_option("--omega", hofstadter.omega, "level frequency (in the lower gap)")
      ->capture_default_str();
  sub_h->add_option("--spacing", hofstadter.spacing, "edge-site spacing of the two levels")
      ->capture_default_str();
  sub_h->add_option("--n-max", hofstadter.n_max, "strip depth for the edge eigenproblem")
      ->capture_default_str();
  sub_h->add_option("--k-points", hofstadter.k_points, "Brillouin-zone samples")
      ->capture_default_str();
  sub_h->add_option("--t-max", hofstadter.t_max, "integration horizon")->capture_default_str();
  sub_h->add_option("--samples", hofstadter.samples, "trace samples")->capture_default_str();
  sub_h->add_option("--dt", hofstadter.dt, "RK4 step")->capture_default_str();
  sub_h->add_option("--margin", hofstadter.margin, "upstream rows before the first level")
      ->capture_default_str();
  add_common(sub_h, hofstadter_common);

  FloquetParams floquet;
  CommonOptions floquet_common;
  auto* sub_f = app.add_subcommand("floquet", "anomalous Floquet bath, stroboscopic decay");
  sub_f->add_option("--period", floquet.period, "drive period T")->capture_default_str();
  sub_f->add_option("--t1-ratio", floquet.t1_ratio, "T1/T (T2 = T - 2 T1)")
      ->capture_default_str();
  sub_f->add_option("--rho-ratio", floquet.rho_ratio, "rho / kappa_bath")->capture_default_str();
  sub_f->add_option("--spacing", floquet.spacing, "A-sublattice spacing of the two levels")
      ->capture_default_str();
  sub_f->add_option("--cycles", floquet.cycles, "number of drive cycles")->capture_default_str();
  add_common(sub_f, floquet_common);

  ManybodyParams manybody;
  CommonOptions manybody_common;
  auto* sub_m = app.add_subcommand("manybody", "fermion/boson non-decay probabilities");
  sub_m->add_option("-n,--n", manybody.n, "number of levels = particles")->capture_default_str();
  sub_m->add_option("--kappa", manybody.kappa, "level-bath coupling")->capture_default_str();
  sub_m->add_option("--spacing", manybody.spacing, "site spacing")->capture_default_str();
  sub_m->add_option("--kind", manybody.kind, "unidirectional | bidirectional")
      ->check(CLI::IsMember({"unidirectional", "bidirectional"}))
      ->capture_default_str();
  sub_m->add_option("--v", manybody.v, "chiral group velocity")->capture_default_str();
  sub_m->add_option("--kappa-hop", manybody.kappa_hop, "cosine-band hopping")
      ->capture_default_str();
  sub_m->add_option("--t-max", manybody.t_max, "horizon")->capture_default_str();
  sub_m->add_option("--steps", manybody.steps, "samples")->capture_default_str();
  add_common(sub_m, manybody_common);

  VerifyMarkovParams markov;
  CommonOptions markov_common;
  auto* sub_v = app.add_subcommand("verify-markov", "quadrature oracle vs closed form");
  sub_v->add_option("-n,--n", markov.n, "number of levels")->capture_default_str();
  sub_v->add_option("--kappa", markov.kappa, "coupling")->capture_default_str();
  sub_v->add_option("--spacing", markov.spacing, "site spacing")->capture_default_str();
  sub_v->add_option("--v", markov.v, "chiral group velocity")->capture_default_str();
  sub_v->add_option("--grid-points", markov.grid_points, "PV quadrature points (>= 1024)")
      ->capture_default_str();
  add_common(sub_v, markov_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;  // configuration / usage error
  }

  try {
    if (sub_eff->parsed()) config = {effective, effective_common};
    else if (sub_decay->parsed()) config = {decay, decay_common};
    else if (sub_q->parsed()) config = {quiescence, quiescence_common};
    else if (sub_b->parsed()) config = {bloch, bloch_common};
    else if (sub_h->parsed()) config = {hofstadter, hofstadter_common};
    else if (sub_f->parsed()) config = {floquet, floquet_common};
    else if (sub_m->parsed()) config = {manybody, manybody_common};
    else config = {markov, markov_common};
    chiraldecay::cli::run(config);
  } catch (const NonSquareError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const NoConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const NumericalFailureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const QuadratureDivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
