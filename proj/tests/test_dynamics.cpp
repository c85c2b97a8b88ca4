#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chiraldecay/dynamics.hpp"
#include "chiraldecay/numerics.hpp"

using namespace chiraldecay;
namespace num = chiraldecay::numerics;

namespace {

std::mt19937_64 rng(4242);

std::vector<double> uniform_grid(double t_max, int steps) {
  std::vector<double> t(steps + 1);
  for (int i = 0; i <= steps; ++i) t[i] = t_max * i / steps;
  t[0] = 0.0;
  return t;
}

std::vector<cplx> basis_state(int n, int idx) {
  std::vector<cplx> c(n, 0.0);
  c[idx] = 1.0;
  return c;
}

// max |y - poly_fit(y)| for a least-squares complex polynomial of the given
// degree; abscissa rescaled to [0,1] to keep the normal equations tame.
double polyfit_residual(const std::vector<double>& ts, const std::vector<cplx>& ys, int degree) {
  const int m = static_cast<int>(ts.size()), cols = degree + 1;
  const double tmax = ts.back();
  ComplexMatrix gram(cols, cols);
  std::vector<cplx> rhs(cols, 0.0);
  for (int r = 0; r < m; ++r) {
    const double s = ts[r] / tmax;
    std::vector<double> pow(cols, 1.0);
    for (int j = 1; j < cols; ++j) pow[j] = pow[j - 1] * s;
    for (int i = 0; i < cols; ++i) {
      rhs[i] += pow[i] * ys[r];
      for (int j = 0; j < cols; ++j) gram(i, j) += pow[i] * pow[j];
    }
  }
  const auto coef = num::solve_regularized(gram, rhs);
  double resid = 0.0;
  for (int r = 0; r < m; ++r) {
    const double s = ts[r] / tmax;
    cplx fit = 0.0;
    double p = 1.0;
    for (int j = 0; j < cols; ++j) {
      fit += coef[j] * p;
      p *= s;
    }
    resid = std::max(resid, std::abs(fit - ys[r]));
  }
  return resid;
}

}  // namespace

TEST_CASE("scalar decay: P(t) = e^{-2 Delta t}") {
  const double delta = 0.7;
  const auto h = degenerate_chain_hamiltonian(1, delta);
  const auto trace = propagate(h, basis_state(1, 0), uniform_grid(5.0, 200));
  for (size_t k = 0; k < trace.times.size(); ++k)
    CHECK(trace.survival[k] ==
          doctest::Approx(std::exp(-2.0 * delta * trace.times[k])).epsilon(1e-10));
}

TEST_CASE("two degenerate levels: |c2| = g t e^{-Delta t}, peaking at t = 1/Delta") {
  const double delta = 0.5;
  const auto h = degenerate_chain_hamiltonian(2, delta);
  const double g = 2.0 * delta;  // kappa^2 / v
  const auto grid = uniform_grid(6.0, 600);
  const auto trace = propagate(h, basis_state(2, 0), grid);
  double peak_t = 0.0, peak = 0.0;
  for (size_t k = 0; k < grid.size(); ++k) {
    const double expect = g * grid[k] * std::exp(-delta * grid[k]);
    CHECK(std::abs(std::abs(trace.amplitudes[k][1]) - expect) < 1e-10);
    if (std::abs(trace.amplitudes[k][1]) > peak) {
      peak = std::abs(trace.amplitudes[k][1]);
      peak_t = grid[k];
    }
  }
  CHECK(peak_t == doctest::Approx(1.0 / delta).epsilon(0.01));
}

TEST_CASE("quantum Hall effective model: level 1 decays exponentially, untouched by level 2") {
  const double kbeta = 2.536, v = 1.6;
  const LevelChain chain({{-1.5, 0.2, 0}, {-1.5, 0.2, 3}});
  const auto h = build_unidirectional(chain, ChiralLinear{v, -1.5 - v * kbeta});
  const auto grid = uniform_grid(150.0, 300);
  const auto trace = propagate(h, basis_state(2, 0), grid);

  const auto h1 = build_unidirectional(LevelChain({{-1.5, 0.2, 0}}),
                                       ChiralLinear{v, -1.5 - v * kbeta});
  const auto solo = propagate(h1, basis_state(1, 0), grid);
  for (size_t k = 0; k < grid.size(); ++k) {
    const double p1 = std::norm(trace.amplitudes[k][0]);
    CHECK(p1 == doctest::Approx(std::exp(-0.025 * grid[k])).epsilon(1e-9));
    CHECK(std::abs(std::abs(trace.amplitudes[k][0]) - std::abs(solo.amplitudes[k][0])) <=
          1e-12);
  }
}

TEST_CASE("propagate preconditions") {
  const auto h = degenerate_chain_hamiltonian(2, 1.0);
  CHECK_THROWS_AS(propagate(h, basis_state(3, 0), uniform_grid(1.0, 10)),
                  DimensionMismatchError);
  CHECK_THROWS_AS(propagate(h, {cplx(0.5, 0.0), cplx(0.0, 0.0)}, uniform_grid(1.0, 10)),
                  PreconditionError);
  CHECK_THROWS_AS(propagate(h, basis_state(2, 0), {1.0, 2.0}), PreconditionError);
}

TEST_CASE("sigma_max at t=0 is exactly one; scalar case matches e^{-2 Delta t}") {
  const double delta = 0.8;
  const auto h = degenerate_chain_hamiltonian(1, delta);
  const auto q = sigma_max_curve(h, uniform_grid(3.0, 60));
  CHECK(q.sigma_curve[0] == 1.0);
  for (size_t k = 0; k < q.times.size(); ++k)
    CHECK(q.sigma_curve[k] ==
          doctest::Approx(std::exp(-2.0 * delta * q.times[k])).epsilon(1e-9));
}

TEST_CASE("N=20 degenerate chain stays quiescent out to t ~ 28") {
  const auto h = degenerate_chain_hamiltonian(20, 1.0);
  const auto q = sigma_max_curve(h, {0.0, 25.0, 31.0});
  CHECK(q.sigma_curve[1] > 0.97);
  CHECK(q.sigma_curve[2] < 0.97);
}

TEST_CASE("survival is bounded by sigma_max on the same grid") {
  std::uniform_real_distribution<double> uk(0.1, 0.3), uw(-0.5, 0.5), ur(-1.0, 1.0);
  std::vector<Level> levels;
  for (int i = 0; i < 5; ++i) levels.push_back({uw(rng), uk(rng), 2 * i});
  const auto h = build_unidirectional(LevelChain(levels), ChiralLinear{1.5, 0.0});
  std::vector<cplx> c0(5);
  for (auto& v : c0) v = cplx(ur(rng), ur(rng));
  const double nc = norm2(c0);
  for (auto& v : c0) v /= nc;
  const auto grid = uniform_grid(10.0, 100);
  const auto trace = propagate(h, c0, grid);
  const auto q = sigma_max_curve(h, grid);
  for (size_t k = 0; k < grid.size(); ++k)
    CHECK(trace.survival[k] <= q.sigma_curve[k] + 1e-10);
}

TEST_CASE("optimal state attains sigma_max") {
  const auto h = degenerate_chain_hamiltonian(6, 1.0);
  const auto grid = uniform_grid(4.0, 40);
  const auto q = sigma_max_curve(h, grid);  // optimal state at the last point
  const auto trace = propagate(h, q.optimal_state, grid);
  CHECK(trace.survival.back() == doctest::Approx(q.sigma_curve.back()).epsilon(1e-8));
}

TEST_CASE("complete decay of the degenerate chain") {
  const auto h2 = degenerate_chain_hamiltonian(2, 1.0);
  const auto t2 = propagate(h2, basis_state(2, 0), {0.0, 10.0});
  CHECK(t2.survival.back() < 1e-6);
  const auto h4 = degenerate_chain_hamiltonian(4, 1.0);
  const auto t4 = propagate(h4, basis_state(4, 0), {0.0, 20.0});
  CHECK(t4.survival.back() < 1e-6);
}

TEST_CASE("exceptional-point envelope: c_N e^{Delta t} is a degree N-1 polynomial") {
  const int n = 4;
  const auto h = degenerate_chain_hamiltonian(n, 1.0);
  const auto grid = uniform_grid(6.0, 24);
  const auto trace = propagate(h, basis_state(n, 0), grid);
  std::vector<cplx> ys(grid.size());
  for (size_t k = 0; k < grid.size(); ++k)
    ys[k] = trace.amplitudes[k][n - 1] * std::exp(grid[k]);
  CHECK(polyfit_residual(grid, ys, n - 1) < 1e-8);
  // one degree less cannot represent it
  CHECK(polyfit_residual(grid, ys, n - 2) > 1e-3);
}

TEST_CASE("quiescence time: scalar closed form ln(2)/2") {
  const auto h = degenerate_chain_hamiltonian(1, 1.0);
  const auto q = quiescence_time(h, 0.5, 2.0, 0.01);
  REQUIRE(q.tau.has_value());
  CHECK_FALSE(q.no_crossing);
  CHECK(*q.tau == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-3));
}

TEST_CASE("quiescence time agrees with the multi-level scan") {
  const auto h = degenerate_chain_hamiltonian(4, 1.0);
  const auto q = quiescence_time(h, 0.9, 20.0, 0.1);
  const auto scan = resilience_times(h, {0.9, 0.5}, 20.0, 0.1);
  REQUIRE(q.tau.has_value());
  CHECK(*q.tau == doctest::Approx(scan.taus[0]).epsilon(1e-6));
  CHECK(scan.taus[1] > scan.taus[0]);
}

TEST_CASE("no-crossing scans are flagged with t_max as a lower bound") {
  const auto h = degenerate_chain_hamiltonian(8, 1.0);  // quiescent well past t=2
  const auto q = quiescence_time(h, 0.5, 2.0, 0.01);
  CHECK(q.no_crossing);
  CHECK(*q.tau == 2.0);
}

TEST_CASE("Bloch ladder: eigenvalues, period scaling, degenerate limit") {
  const int n = 6;
  const double delta = 1.0, c_over = 10.0;
  const double tb = 2.0 * M_PI / (c_over * delta);
  const auto grid = uniform_grid(3.0 * tb, 120);  // dt = tb/40
  const auto res = bloch_scenario(n, c_over * delta, delta, basis_state(n, 0), grid);

  CHECK(res.t_b == doctest::Approx(tb).epsilon(1e-15));
  for (int a = 0; a < n; ++a) {
    CHECK(res.eigs[a].real() == doctest::Approx(c_over * delta * a).epsilon(1e-12));
    CHECK(res.eigs[a].imag() == doctest::Approx(-delta).epsilon(1e-12));
  }
  // exact spacing between consecutive eigenvalues
  for (int a = 0; a + 1 < n; ++a)
    CHECK((res.eigs[a + 1] - res.eigs[a]).real() == doctest::Approx(c_over * delta).epsilon(1e-14));

  // stroboscopic envelope: P(t + T_B) = e^{-2 Delta T_B} P(t)
  const double factor = std::exp(-2.0 * delta * tb);
  for (size_t k = 0; k + 40 < grid.size(); ++k) {
    CHECK(res.trace.survival[k + 40] ==
          doctest::Approx(factor * res.trace.survival[k]).epsilon(1e-8));
  }

  // C -> 0 reduces to the degenerate chain
  const auto tiny = bloch_scenario(n, 1e-12 * delta, delta, basis_state(n, 0),
                                   uniform_grid(5.0, 100));
  const auto deg = propagate(degenerate_chain_hamiltonian(n, delta), basis_state(n, 0),
                             uniform_grid(5.0, 100));
  for (size_t k = 0; k < tiny.trace.times.size(); ++k)
    for (int a = 0; a < n; ++a)
      CHECK(std::abs(tiny.trace.amplitudes[k][a] - deg.amplitudes[k][a]) < 1e-6);
}

TEST_CASE("Bloch amplitudes oscillate with the Bloch period") {
  const int n = 6;
  const double delta = 1.0, C = 10.0;
  const double tb = 2.0 * M_PI / C;
  const auto grid = uniform_grid(3.0 * tb, 240);
  const auto res = bloch_scenario(n, C, delta, basis_state(n, 0), grid);
  // |c_2(t + T_B)| = e^{-Delta T_B} |c_2(t)|: damped periodicity
  for (size_t k = 10; k + 80 < grid.size(); k += 20) {
    const double a = std::abs(res.trace.amplitudes[k][1]);
    const double b = std::abs(res.trace.amplitudes[k + 80][1]);
    CHECK(b == doctest::Approx(a * std::exp(-delta * tb)).epsilon(1e-6));
  }
}
