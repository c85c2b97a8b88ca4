#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chiraldecay/manybody.hpp"
#include "chiraldecay/numerics.hpp"

using namespace chiraldecay;
namespace num = chiraldecay::numerics;

namespace {
std::mt19937_64 rng(90210);

// 30-term Taylor propagator, independent of the expm kernel.
ComplexMatrix taylor_propagator(const ComplexMatrix& h, double t) {
  const int n = h.rows();
  ComplexMatrix m = h;
  m *= cplx(0.0, -t);
  ComplexMatrix sum = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int j = 1; j <= 30; ++j) {
    term = m * term;
    term *= cplx(1.0 / j, 0.0);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("no decay at t = 0 for either statistics") {
  const LevelChain chain({{0.1, 0.2, 0}, {-0.2, 0.15, 2}});
  const auto h = build_unidirectional(chain, ChiralLinear{2.0, 0.0});
  CHECK(nondecay_probability(h, 0.0, StatisticsKind::fermion) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nondecay_probability(h, 0.0, StatisticsKind::boson) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chiral decay rate: direct sum and diagonal identity") {
  const Dispersion d = ChiralLinear{1.6, 0.0};
  const LevelChain one({{0.0, 0.2, 0}});
  CHECK(chiral_decay_rate(one, d) == doctest::Approx(0.025).epsilon(1e-14));

  const LevelChain zeros({{0.0, 0.0, 0}, {0.1, 0.0, 1}});
  CHECK(chiral_decay_rate(zeros, d) == 0.0);

  const LevelChain chain({{0.3, 0.2, 0}, {-0.4, 0.1, 3}, {0.0, 0.25, 5}});
  const auto h = build_unidirectional(chain, d);
  double diag_rate = 0.0;
  for (int i = 0; i < h.n; ++i) diag_rate -= 2.0 * h.entries(i, i).imag();
  CHECK(chiral_decay_rate(chain, d) == doctest::Approx(diag_rate).epsilon(1e-13));
}

TEST_CASE("chiral decay is statistics-blind and exponential") {
  // N=3 uniform chain: rate 3 kappa^2 / v
  const double kappa = 0.2, v = 1.6;
  const LevelChain chain({{0.0, kappa, 0}, {0.0, kappa, 1}, {0.0, kappa, 4}});
  const Dispersion d = ChiralLinear{v, 0.0};
  const auto h = build_unidirectional(chain, d);
  const double rate = chiral_decay_rate(chain, d);
  CHECK(rate == doctest::Approx(3.0 * kappa * kappa / v).epsilon(1e-14));
  for (double t : {0.5, 3.0, 10.0, 40.0}) {
    const double pf = nondecay_probability(h, t, StatisticsKind::fermion);
    const double pb = nondecay_probability(h, t, StatisticsKind::boson);
    CHECK(std::abs(pf - std::exp(-rate * t)) <= 1e-10);
    CHECK(std::abs(pb - std::exp(-rate * t)) <= 1e-10);
  }
}

TEST_CASE("fermion and boson probabilities coincide for every chiral chain") {
  std::uniform_real_distribution<double> uk(0.05, 0.3), uw(-0.8, 0.8), ut(0.0, 30.0);
  std::uniform_int_distribution<int> un(1, 8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = un(rng);
    std::vector<int> sites{0, 1, 3, 4, 7, 8, 11, 13};
    std::shuffle(sites.begin(), sites.end(), rng);
    std::vector<Level> levels;
    for (int i = 0; i < n; ++i) levels.push_back({uw(rng), uk(rng), sites[i]});
    const auto h = build_unidirectional(LevelChain(levels), ChiralLinear{2.0, 0.0});
    for (int k = 0; k < 5; ++k) {
      const double t = ut(rng);
      const double pf = nondecay_probability(h, t, StatisticsKind::fermion);
      const double pb = nondecay_probability(h, t, StatisticsKind::boson);
      CHECK(std::abs(pf - pb) <= 1e-12);
      CHECK(pf >= 0.0);
      CHECK(pf <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("bidirectional N=2: statistics differ; both match the Taylor oracle") {
  const LevelChain chain({{0.0, 0.2, 0}, {0.0, 0.2, 1}});
  const auto h = build_bidirectional(chain, 1.0);
  bool differ = false;
  for (double t : {2.0, 5.0, 10.0, 20.0}) {
    const ComplexMatrix u = taylor_propagator(h.entries, t);
    // 2x2 det and perm by hand
    const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const cplx perm = u(0, 0) * u(1, 1) + u(0, 1) * u(1, 0);
    const double pf = nondecay_probability(h, t, StatisticsKind::fermion);
    const double pb = nondecay_probability(h, t, StatisticsKind::boson);
    CHECK(std::abs(pf - std::norm(det)) <= 1e-8);
    CHECK(std::abs(pb - std::norm(perm)) <= 1e-8);
    if (std::abs(pf - pb) > 1e-6) differ = true;
    CHECK(pf <= 1.0 + 1e-10);
    CHECK(pb <= 1.0 + 1e-10);
  }
  CHECK(differ);
}

TEST_CASE("fermionic decay depends only on the spectrum") {
  // |det exp(-iHt)|^2 = e^{2 t sum Im(eig)} for any H
  const auto h = build_bidirectional(LevelChain({{0.3, 0.25, 0}, {-0.5, 0.2, 1}, {0.1, 0.15, 3}}),
                                     1.0);
  const auto ev = num::eigvals(h.entries).values;
  double im_sum = 0.0;
  for (const auto& e : ev) im_sum += e.imag();
  for (double t : {1.0, 4.0, 9.0}) {
    ComplexMatrix m = h.entries;
    m *= cplx(0.0, -t);
    const double lhs = std::norm(num::determinant(num::expm(m)));
    const double rhs = std::exp(2.0 * t * im_sum);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
    CHECK(std::abs(nondecay_probability(h, t, StatisticsKind::fermion) - rhs) <= 1e-8 * rhs);
  }
}

TEST_CASE("boson path rejects N > 24") {
  std::vector<Level> levels;
  for (int i = 0; i < 25; ++i) levels.push_back({0.0, 0.1, i});
  const auto h = build_unidirectional(LevelChain(levels), ChiralLinear{1.0, 0.0});
  CHECK_THROWS_AS(nondecay_probability(h, 1.0, StatisticsKind::boson), TooLargeError);
  CHECK(nondecay_probability(h, 1.0, StatisticsKind::fermion) > 0.0);
}
