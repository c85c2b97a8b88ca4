#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chiraldecay/model.hpp"
#include "chiraldecay/numerics.hpp"

using namespace chiraldecay;
namespace num = chiraldecay::numerics;

namespace {
constexpr double kPi = 3.14159265358979323846;
std::mt19937_64 rng(777);
}  // namespace

TEST_CASE("solve_resonance on the linear chiral branch") {
  const Resonance r = solve_resonance(ChiralLinear{1.0, 0.0}, 0.0);
  CHECK(r.k_beta == 0.0);
  CHECK(r.v_beta == 1.0);

  const Resonance r2 = solve_resonance(ChiralLinear{1.6, -3.0}, 0.0);
  CHECK(std::abs(omega_at(ChiralLinear{1.6, -3.0}, r2.k_beta)) <= 1e-10);
  CHECK(r2.v_beta == 1.6);
}

TEST_CASE("solve_resonance on the Floquet sawtooth") {
  const Resonance r = solve_resonance(FloquetSawtooth{1.0}, 0.0);
  CHECK(r.k_beta == doctest::Approx(-kPi).epsilon(1e-15));
  CHECK(r.v_beta == 1.0);
  // quasienergy wraps: omega and omega + 2pi/T give the same Bloch number
  const Resonance r2 = solve_resonance(FloquetSawtooth{0.5}, 1.0);
  const Resonance r3 = solve_resonance(FloquetSawtooth{0.5}, 1.0 + 4.0 * kPi);
  CHECK(r2.k_beta == doctest::Approx(r3.k_beta).epsilon(1e-12));
  CHECK(r2.v_beta == 2.0);
}

TEST_CASE("solve_resonance rejections") {
  CHECK_THROWS_AS(solve_resonance(CosineBand{1.0}, 0.5), MultipleRootsError);
  CHECK_THROWS_AS(solve_resonance(CosineBand{1.0}, 5.0), OutOfBandError);
  CHECK_THROWS_AS(solve_resonance(ChiralLinear{1.0, 0.0}, 4.0), OutOfBandError);
}

TEST_CASE("tabulated branch resonance via monotone cubic interpolation") {
  std::vector<double> ks, ws;
  for (int i = 0; i < 33; ++i) {
    const double k = -kPi + i * (2.0 * kPi / 33.0);
    ks.push_back(k);
    ws.push_back(1.3 * k + 0.2 * std::sin(k));  // strictly increasing
  }
  const TabulatedChiral tab(ks, ws);
  const Dispersion d = tab;
  const double target = 0.7;
  const Resonance r = solve_resonance(d, target);
  CHECK(std::abs(omega_at(d, r.k_beta) - target) <= 1e-10);
  // derivative of the underlying function at k_beta, 1e-3 accuracy is plenty
  CHECK(r.v_beta == doctest::Approx(1.3 + 0.2 * std::cos(r.k_beta)).epsilon(1e-3));
}

TEST_CASE("LevelChain validation") {
  CHECK_THROWS_AS(LevelChain({}), InvalidChainError);
  CHECK_THROWS_AS(LevelChain({{0.0, -0.1, 0}}), InvalidChainError);
  CHECK_THROWS_AS(LevelChain({{0.0, 0.1, 3}, {0.5, 0.1, 3}}), DuplicateSiteError);
}

TEST_CASE("single level in a chiral band: purely imaginary shift") {
  const LevelChain chain({{0.0, 0.2, 0}});
  const auto h = build_unidirectional(chain, ChiralLinear{1.6, -3.0});
  CHECK(h.n == 1);
  CHECK(h.entries(0, 0).real() == 0.0);
  CHECK(h.entries(0, 0).imag() == doctest::Approx(-0.0125).epsilon(1e-12));
}

TEST_CASE("two-level chiral build reproduces the quantum Hall effective matrix") {
  // omega0 tuned so the resonance sits at k_beta = 2.536 with v = 1.6
  const double kbeta = 2.536, v = 1.6;
  const double omega0 = -1.5 - v * kbeta;
  const LevelChain chain({{-1.5, 0.2, 0}, {-1.5, 0.2, 3}});
  const auto h = build_unidirectional(chain, ChiralLinear{v, omega0});
  const cplx diag(-1.5, -0.0125);
  CHECK(std::abs(h.entries(0, 0) - diag) < 1e-10);
  CHECK(std::abs(h.entries(1, 1) - diag) < 1e-10);
  CHECK(h.entries(0, 1) == cplx(0.0));
  const cplx expected = -cplx(0, 1) * 0.025 * std::exp(cplx(0, 3.0 * kbeta));
  CHECK(std::abs(h.entries(1, 0) - expected) < 1e-9);
  CHECK(h.resonance_meta[0].k_beta == doctest::Approx(kbeta).epsilon(1e-10));
}

TEST_CASE("decoupled chain is purely real and diagonal") {
  const LevelChain chain({{0.3, 0.0, 0}, {-0.4, 0.0, 2}, {0.1, 0.0, 5}});
  const auto h = build_unidirectional(chain, ChiralLinear{1.0, 0.0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(h.entries(i, j).imag() == 0.0);
        CHECK(h.entries(i, j).real() == h.sorted_levels[i].omega);
      } else {
        CHECK(h.entries(i, j) == cplx(0.0));
      }
    }
}

TEST_CASE("levels are canonically sorted by site with the permutation recorded") {
  const LevelChain chain({{0.1, 0.1, 7}, {0.2, 0.1, -2}, {0.3, 0.1, 4}});
  const auto h = build_unidirectional(chain, ChiralLinear{2.0, 0.0});
  CHECK(h.sorted_levels[0].site == -2);
  CHECK(h.sorted_levels[1].site == 4);
  CHECK(h.sorted_levels[2].site == 7);
  CHECK(h.permutation == std::vector<int>{1, 2, 0});
}

TEST_CASE("triangularity is exact and eigenvalues sit on the diagonal") {
  std::uniform_real_distribution<double> uk(0.05, 0.3), uw(-1.0, 1.0);
  std::uniform_int_distribution<int> un(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = un(rng);
    std::vector<Level> levels;
    std::vector<int> sites;
    for (int i = 0; i < 24; ++i) sites.push_back(i);
    std::shuffle(sites.begin(), sites.end(), rng);
    for (int i = 0; i < n; ++i) levels.push_back({uw(rng), uk(rng), sites[i]});
    const LevelChain chain(levels);
    const auto h = build_unidirectional(chain, ChiralLinear{2.0, 0.0});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) CHECK(h.entries(i, j) == cplx(0.0));
    const auto ev = num::eigvals(h.entries);
    for (int i = 0; i < n; ++i) {
      const auto& l = h.sorted_levels[i];
      const cplx expect(l.omega, -l.kappa * l.kappa / (2.0 * h.resonance_meta[i].v_beta));
      CHECK(std::abs(ev.values[i] - expect) <= 1e-12);
    }
  }
}

TEST_CASE("cosine band evaluation is even in k") {
  std::uniform_real_distribution<double> uk(0.0, kPi);
  const Dispersion d = CosineBand{1.3};
  for (int i = 0; i < 1000; ++i) {
    const double k = uk(rng);
    CHECK(omega_at(d, -k) - omega_at(d, k) == 0.0);
  }
}

TEST_CASE("bidirectional closed form at band center") {
  const double kap = 1.0, kc = 0.2;
  SUBCASE("single level") {
    const auto h = build_bidirectional(LevelChain({{0.0, kc, 0}}), kap);
    CHECK(std::abs(h.entries(0, 0) - cplx(0.0, -kc * kc / (2.0 * kap))) < 1e-15);
  }
  SUBCASE("even separation hosts a bound state in the continuum") {
    const auto h = build_bidirectional(LevelChain({{0.0, kc, 0}, {0.0, kc, 2}}), kap);
    const double g = kc * kc / (2.0 * kap);
    CHECK(std::abs(h.entries(0, 0) - cplx(0.0, -g)) < 1e-15);
    CHECK(std::abs(h.entries(0, 1) - cplx(0.0, g)) < 1e-15);
    CHECK(std::abs(h.entries(1, 0) - cplx(0.0, g)) < 1e-15);
    const auto ev = num::eigvals(h.entries).values;
    const double d0 = std::min(std::abs(ev[0]), std::abs(ev[1]));
    const double d1 = std::max(std::abs(ev[0] + cplx(0.0, 2.0 * g)),
                               std::abs(ev[1] + cplx(0.0, 2.0 * g)));
    CHECK(d0 < 1e-14);         // one eigenvalue at 0
    CHECK(ev.size() == 2);
    CHECK(std::min(std::abs(ev[0] + cplx(0.0, 2.0 * g)),
                   std::abs(ev[1] + cplx(0.0, 2.0 * g))) < 1e-14);  // the other at -i kc^2/kap
    (void)d1;
  }
  SUBCASE("odd separation decays completely") {
    const auto h = build_bidirectional(LevelChain({{0.0, 0.2, 0}, {0.0, 0.3, 1}}), kap);
    // off-diagonals are real: -i^2 k1 k2/(2 kap) = +k1 k2/(2 kap)
    CHECK(h.entries(0, 1).imag() == 0.0);
    CHECK(h.entries(0, 1).real() == doctest::Approx(0.2 * 0.3 / (2.0 * kap)).epsilon(1e-14));
    for (const auto& ev : num::eigvals(h.entries).values) CHECK(ev.imag() < 0.0);
  }
  SUBCASE("out of band rejected") {
    CHECK_THROWS_AS(build_bidirectional(LevelChain({{2.5, 0.1, 0}}), 1.0), OutOfBandError);
  }
}

TEST_CASE("find_bound_states: no-BIC for chiral baths, BIC dichotomy for bidirectional") {
  const LevelChain chain({{0.0, 0.2, 0}, {0.1, 0.15, 1}, {-0.2, 0.25, 5}});
  const auto uni = build_unidirectional(chain, ChiralLinear{2.0, 0.0});
  CHECK(find_bound_states(uni, 1e-9).empty());

  const auto even = build_bidirectional(LevelChain({{0.0, 0.2, 0}, {0.0, 0.2, 2}}), 1.0);
  const auto bics = find_bound_states(even, 1e-12);
  CHECK(bics.size() == 1);

  const auto odd = build_bidirectional(LevelChain({{0.0, 0.2, 0}, {0.0, 0.2, 3}}), 1.0);
  CHECK(find_bound_states(odd, 1e-9).empty());
}

TEST_CASE("degenerate chain is an order-N exceptional point") {
  for (int n : {2, 3, 4, 5, 6}) {
    std::vector<Level> levels;
    for (int i = 0; i < n; ++i) levels.push_back({0.0, 0.3, i});
    const auto h = build_unidirectional(LevelChain(levels), ChiralLinear{1.0, 0.0});
    const auto ev = num::eigvals(h.entries);
    for (int i = 1; i < n; ++i) CHECK(std::abs(ev.values[i] - ev.values[0]) < 1e-13);
    // geometric multiplicity 1: rank(H - lambda I) = N - 1
    ComplexMatrix shifted = h.entries;
    for (int i = 0; i < n; ++i) shifted(i, i) -= ev.values[0];
    const auto sv = num::singular_values(shifted);
    int rank = 0;
    for (double s : sv)
      if (s > 1e-8) ++rank;
    CHECK(rank == n - 1);
    if (n > 2) CHECK(ev.condition_warning);
  }
}

TEST_CASE("delta_numeric quadrature reproduces the closed form") {
  const LevelChain chain({{0.1, 0.12, 0}, {-0.3, 0.2, 2}, {0.4, 0.15, 5}});
  const Dispersion d = ChiralLinear{3.0, 0.0};
  const auto delta = delta_numeric(chain, d, {32768, -1.0});
  const auto closed = markov_delta_closed_form(chain, d);

  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(closed(i, j)));

  for (int b = 0; b < 3; ++b) {
    // diagonal: PV term cancels pairwise, on-shell half remains exactly
    CHECK(std::abs(delta(b, b) - closed(b, b)) < 1e-14);
    for (int a = 0; a < 3; ++a) {
      if (a == b) continue;
      if (a > b) {
        CHECK(std::abs(delta(a, b) - closed(a, b)) < 0.01 * std::abs(closed(a, b)));
      } else {
        CHECK(std::abs(delta(a, b)) < 0.01 * scale);
      }
    }
  }
}

TEST_CASE("delta_numeric precondition and self-consistency") {
  const LevelChain chain({{0.0, 0.1, 0}});
  CHECK_THROWS_AS(delta_numeric(chain, ChiralLinear{1.0, 0.0}, {512, -1.0}), PreconditionError);
  CHECK_THROWS_AS(delta_numeric(chain, CosineBand{1.0}, {2048, -1.0}), MultipleRootsError);
}

TEST_CASE("markov oracle property: broad bands at 1e-2") {
  std::uniform_real_distribution<double> uk(0.05, 0.2), uw(-0.8, 0.8), uv(2.0, 4.0);
  std::uniform_int_distribution<int> un(2, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = un(rng);
    std::vector<int> sites{0, 2, 3, 6, 9};
    std::shuffle(sites.begin(), sites.end(), rng);
    std::vector<Level> levels;
    for (int i = 0; i < n; ++i) levels.push_back({uw(rng), uk(rng), sites[i]});
    const double v = uv(rng);  // v >= 50 kappa_max^2 = 2
    const Dispersion d = ChiralLinear{v, 0.0};
    const LevelChain chain(levels);
    const auto delta = delta_numeric(chain, d, {32768, -1.0});
    const auto closed = markov_delta_closed_form(chain, d);
    double scale = 0.0, err = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        scale = std::max(scale, std::abs(closed(i, j)));
        err = std::max(err, std::abs(delta(i, j) - closed(i, j)));
      }
    CHECK(err / scale <= 1e-2);
  }
}
