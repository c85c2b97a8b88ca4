#include "chiraldecay/baths/metacrystal.hpp"

#include <cmath>
#include <set>

namespace chiraldecay::baths {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double MetacrystalHoppings::omega(double k) const {
  double w = 0.0;
  for (int m = 1; m <= range; ++m) {
    const cplx th = at(m);
    // theta_m e^{imk} + conj pair is 2 Re[theta_m e^{imk}]
    w += 2.0 * (th.real() * std::cos(m * k) - th.imag() * std::sin(m * k));
  }
  return w;
}

double MetacrystalHoppings::domega_dk(double k) const {
  double w = 0.0;
  for (int m = 1; m <= range; ++m) {
    const cplx th = at(m);
    w += 2.0 * m * (-th.real() * std::sin(m * k) - th.imag() * std::cos(m * k));
  }
  return w;
}

MetacrystalHoppings metacrystal_hoppings(double v, int range_m, HoppingWindow window) {
  if (range_m < 1) throw PreconditionError("metacrystal_hoppings: range_m must be >= 1");
  MetacrystalHoppings out;
  out.range = range_m;
  out.theta.assign(2 * range_m + 1, 0.0);
  for (int n = 1; n <= range_m; ++n) {
    double w = 1.0;
    switch (window) {
      case HoppingWindow::none: break;
      case HoppingWindow::fejer: w = 1.0 - static_cast<double>(n) / (range_m + 1); break;
      case HoppingWindow::lanczos: {
        const double x = kPi * n / (range_m + 1);
        w = std::sin(x) / x;
        break;
      }
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx th = cplx(0.0, v * sign / n) * w;
    out.theta[range_m + n] = th;
    out.theta[range_m - n] = std::conj(th);
  }
  return out;
}

ExactTrace metacrystal_evolve(const MetacrystalHoppings& hoppings, int length,
                              const std::vector<Level>& attachments,
                              const std::vector<cplx>& c0, const std::vector<double>& times,
                              double dt) {
  if (length < 4 * hoppings.range)
    throw PreconditionError("metacrystal_evolve: chain shorter than 4x the hopping range");
  if (attachments.empty()) throw PreconditionError("metacrystal_evolve: need attachments");
  if (c0.size() != attachments.size())
    throw DimensionMismatchError("metacrystal_evolve: c0 size != number of levels");
  double kmax = 0.0, hop_budget = 0.0;
  std::set<int> seen;
  for (const auto& a : attachments) {
    if (a.site < 0 || a.site >= length)
      throw PreconditionError("metacrystal_evolve: attachment outside the chain");
    if (!seen.insert(a.site).second)
      throw DuplicateSiteError("metacrystal_evolve: duplicate attachment site");
    kmax = std::max(kmax, std::abs(a.kappa));
  }
  for (int m = 1; m <= hoppings.range; ++m) hop_budget += 2.0 * std::abs(hoppings.at(m));
  if (!(dt > 0.0) || dt > 0.05 / (hop_budget + kmax))
    throw PreconditionError("metacrystal_evolve: dt too large for the hopping budget");
  if (times.empty() || times.front() != 0.0)
    throw PreconditionError("metacrystal_evolve: time grid must start at 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i + 1] > times[i]))
      throw PreconditionError("metacrystal_evolve: time grid must be increasing");
  {
    double n0 = 0.0;
    for (const auto& v : c0) n0 += std::norm(v);
    if (std::abs(n0 - 1.0) > 1e-8)
      throw PreconditionError("metacrystal_evolve: c0 must be normalized");
  }

  const int nlev = static_cast<int>(attachments.size());
  const int nb = length;
  std::vector<cplx> y(nb + nlev, 0.0);
  for (int a = 0; a < nlev; ++a) y[nb + a] = c0[a];

  auto apply = [&](const std::vector<cplx>& src, std::vector<cplx>& dst) {
    const int M = hoppings.range;
    for (int l = 0; l < nb; ++l) {
      cplx acc = 0.0;
      const int lo = std::max(-M, -l), hi = std::min(M, nb - 1 - l);
      for (int m = lo; m <= hi; ++m) {
        if (m == 0) continue;
        acc += hoppings.at(m) * src[l + m];
      }
      dst[l] = acc;
    }
    for (int a = 0; a < nlev; ++a) {
      const auto& at = attachments[a];
      dst[nb + a] = at.omega * src[nb + a] + at.kappa * src[at.site];
      dst[at.site] += at.kappa * src[nb + a];
    }
  };

  std::vector<cplx> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  auto deriv = [&](const std::vector<cplx>& src, std::vector<cplx>& dst) {
    apply(src, dst);
    for (auto& v : dst) v *= cplx(0.0, -1.0);
  };
  auto rk4_step = [&](double h) {
    deriv(y, k1);
    for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    deriv(tmp, k2);
    for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    deriv(tmp, k3);
    for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
    deriv(tmp, k4);
    for (size_t i = 0; i < y.size(); ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  ExactTrace out;
  out.times = times;
  double t = 0.0;
  const int guard = std::min(5, nb);
  for (double target : times) {
    while (target - t > 1e-12) {
      const double h = std::min(dt, target - t);
      rk4_step(h);
      t += h;
    }
    std::vector<cplx> amps(nlev);
    std::vector<double> occ(nlev);
    for (int a = 0; a < nlev; ++a) {
      amps[a] = y[nb + a];
      occ[a] = std::norm(amps[a]);
    }
    out.level_amplitudes.push_back(std::move(amps));
    out.level_occupations.push_back(std::move(occ));
    double norm = 0.0;
    for (const auto& v : y) norm += std::norm(v);
    out.norm_drift = std::max(out.norm_drift, std::abs(norm - 1.0));
    double wb = 0.0;
    for (int l = nb - guard; l < nb; ++l) wb += std::norm(y[l]);
    if (wb > 1e-6)
      throw BoundaryReachedError(
          "metacrystal_evolve: wavefront reached the downstream boundary (enlarge length)");
  }

  out.final_state.bath_amplitudes.assign(y.begin(), y.begin() + nb);
  out.final_state.level_amplitudes.assign(y.begin() + nb, y.end());
  out.final_state.geometry = ChainGeometry{length};
  out.final_state.time = t;
  return out;
}

}  // namespace chiraldecay::baths
