#include "chiraldecay/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace chiraldecay {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TabulatedChiral::TabulatedChiral(std::vector<double> k_samples,
                                 std::vector<double> omega_samples)
    : k_(std::move(k_samples)), w_(std::move(omega_samples)) {
  if (k_.size() != w_.size() || k_.size() < 16)
    throw PreconditionError("TabulatedChiral: grids must have equal length >= 16");
  min_spacing_ = 1e300;
  for (size_t i = 0; i + 1 < k_.size(); ++i) {
    if (!(k_[i + 1] > k_[i]))
      throw PreconditionError("TabulatedChiral: k grid must be strictly increasing");
    if (!(w_[i + 1] > w_[i]))
      throw PreconditionError("TabulatedChiral: omega samples must be strictly increasing");
    min_spacing_ = std::min(min_spacing_, k_[i + 1] - k_[i]);
  }
  // Fritsch-Carlson derivative estimates keep the interpolant monotone.
  const size_t n = k_.size();
  slope_.assign(n, 0.0);
  std::vector<double> h(n - 1), del(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = k_[i + 1] - k_[i];
    del[i] = (w_[i + 1] - w_[i]) / h[i];
  }
  slope_[0] = del[0];
  slope_[n - 1] = del[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
}

double TabulatedChiral::omega(double k) const {
  const size_t n = k_.size();
  if (k <= k_.front()) k = k_.front();
  if (k >= k_.back()) k = k_.back();
  const auto it = std::upper_bound(k_.begin(), k_.end(), k);
  size_t i = (it == k_.begin()) ? 0 : static_cast<size_t>(it - k_.begin()) - 1;
  if (i >= n - 1) i = n - 2;
  const double h = k_[i + 1] - k_[i];
  const double t = (k - k_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * w_[i] + h10 * h * slope_[i] + h01 * w_[i + 1] + h11 * h * slope_[i + 1];
}

bool is_chiral(const Dispersion& d) {
  return !std::holds_alternative<CosineBand>(d);
}

double omega_at(const Dispersion& d, double k) {
  return std::visit(
      [k](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CosineBand>) {
          return 2.0 * v.kappa_hop * std::cos(k);
        } else if constexpr (std::is_same_v<T, ChiralLinear>) {
          return v.omega0 + v.v * k;
        } else if constexpr (std::is_same_v<T, FloquetSawtooth>) {
          return (kPi + k) / v.period;
        } else {
          return v.omega(k);
        }
      },
      d);
}

std::pair<double, double> band_range(const Dispersion& d) {
  return std::visit(
      [](const auto& v) -> std::pair<double, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CosineBand>) {
          return {-2.0 * v.kappa_hop, 2.0 * v.kappa_hop};
        } else if constexpr (std::is_same_v<T, ChiralLinear>) {
          return {v.omega0 - v.v * kPi, v.omega0 + v.v * kPi};
        } else if constexpr (std::is_same_v<T, FloquetSawtooth>) {
          return {0.0, 2.0 * kPi / v.period};
        } else {
          return {v.omega_min(), v.omega_max()};
        }
      },
      d);
}

namespace {

// 80-step bisection on a strictly increasing function.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi,
                         double target) {
  double flo = f(lo) - target;
  if (flo == 0.0) return lo;
  double fhi = f(hi) - target;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Resonance solve_resonance(const Dispersion& d, double omega_level) {
  if (const auto* cb = std::get_if<CosineBand>(&d)) {
    if (std::abs(omega_level) >= 2.0 * cb->kappa_hop)
      throw OutOfBandError("solve_resonance: level outside the cosine band");
    throw MultipleRootsError(
        "solve_resonance: cosine band is non-monotone (two crossings); "
        "bidirectional baths use the closed form instead");
  }
  if (const auto* fs = std::get_if<FloquetSawtooth>(&d)) {
    const double span = 2.0 * kPi / fs->period;
    double w = std::fmod(omega_level, span);
    if (w < 0.0) w += span;
    return {fs->period * w - kPi, 1.0 / fs->period};
  }
  if (const auto* cl = std::get_if<ChiralLinear>(&d)) {
    const auto [lo, hi] = band_range(d);
    if (!(omega_level > lo && omega_level < hi))
      throw OutOfBandError("solve_resonance: level outside the chiral band");
    const double k = bisect_increasing(
        [&](double kk) { return cl->omega0 + cl->v * kk; }, -kPi, kPi, omega_level);
    return {k, cl->v};
  }
  const auto& tab = std::get<TabulatedChiral>(d);
  if (!(omega_level > tab.omega_min() && omega_level < tab.omega_max()))
    throw OutOfBandError("solve_resonance: level outside the tabulated branch");
  const double k = bisect_increasing([&](double kk) { return tab.omega(kk); },
                                     tab.k_min(), tab.k_max(), omega_level);
  double h = 0.25 * tab.min_spacing();
  h = std::min({h, k - tab.k_min(), tab.k_max() - k});
  if (h <= 0.0) h = 0.25 * tab.min_spacing();
  const double v = (tab.omega(k + h) - tab.omega(k - h)) / (2.0 * h);
  return {k, v};
}

}  // namespace chiraldecay
