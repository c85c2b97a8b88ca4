#pragma once

#include <filesystem>
#include <string>
#include <variant>

namespace chiraldecay::cli {

struct CommonOptions {
  std::filesystem::path output_dir = "out";
  bool emit_svg = true;
};

// Defaults reproduce the reference configurations the module is built
// around; see docs/config.md.

struct EffectiveParams {
  int n = 2;
  double omega = -1.5;
  double kappa = 0.2;
  int spacing = 3;
  double v = 1.6;
  double k_beta = 2.536;
  std::string kind = "unidirectional";  // or "bidirectional"
  double kappa_hop = 1.0;
  double t_max = 150.0;
  int steps = 300;
};

struct DecayParams {
  EffectiveParams model;
  int excite = 1;  // 1-based level index (in site order)
};

struct QuiescenceParams {
  int n = 20;
  double p_b = 0.97;
  double t_max = 60.0;
  double dt = 0.25;
  bool sweep = false;  // tau(N) for N = 4..n at P_b in {0.996, 0.97, 0.5}
};

struct BlochParams {
  int n = 6;
  double c_over_delta = 10.0;
  double delta = 1.0;
  double periods = 3.0;  // trace length in units of T_B
  int steps = 600;
};

struct HofstadterParams {
  double phi_over_pi = 0.5;
  double kappa = 1.0;
  double kappa_level = 0.2;
  double omega = -1.5;
  int spacing = 3;
  int n_max = 40;
  int k_points = 320;
  double t_max = 150.0;
  int samples = 150;
  double dt = 0.01;
  int margin = 60;  // upstream rows before the first attachment
};

struct FloquetParams {
  double period = 1.0;
  double t1_ratio = 1.0 / 3.0;  // T1/T (T2 follows)
  double rho_ratio = 0.15;      // rho / kappa_bath
  int spacing = 2;
  int cycles = 60;
};

struct ManybodyParams {
  int n = 3;
  double kappa = 0.2;
  int spacing = 1;
  std::string kind = "unidirectional";
  double v = 1.6;
  double kappa_hop = 1.0;
  double t_max = 60.0;
  int steps = 240;
};

struct VerifyMarkovParams {
  int n = 3;
  double kappa = 0.15;
  int spacing = 2;
  double v = 3.0;
  int grid_points = 32768;
};

using ScenarioParams = std::variant<EffectiveParams, DecayParams, QuiescenceParams, BlochParams,
                                    HofstadterParams, FloquetParams, ManybodyParams,
                                    VerifyMarkovParams>;

struct ScenarioConfig {
  ScenarioParams params;
  CommonOptions common;
};

// Runs the scenario: writes the CSV/SVG artifacts into output_dir and prints
// a one-line summary to stdout. Throws chiraldecay errors on failure.
void run(const ScenarioConfig& config);

}  // namespace chiraldecay::cli
