#include "chiraldecay/baths/harper.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chiraldecay/numerics.hpp"
#include "chiraldecay/parallel.hpp"

namespace chiraldecay::baths {

namespace {

struct KSpectrum {
  std::vector<double> edge_omegas;  // near-edge modes at this k
  std::vector<double> bulk_omegas;
};

KSpectrum solve_column(double phi, double kappa, int n_max, double k) {
  std::vector<double> diag(n_max), off(n_max - 1, kappa);
  for (int n = 1; n <= n_max; ++n) diag[n - 1] = 2.0 * kappa * std::cos(k + n * phi);
  const auto sys = numerics::symmetric_tridiag_eig(diag, off);
  KSpectrum out;
  const int probe = std::min(8, n_max);
  for (int j = 0; j < n_max; ++j) {
    double near = 0.0, far = 0.0, middle = 0.0;
    for (int i = 0; i < probe; ++i) {
      near += sys.vectors[j][i] * sys.vectors[j][i];
      far += sys.vectors[j][n_max - 1 - i] * sys.vectors[j][n_max - 1 - i];
    }
    for (int i = n_max / 3; i < 2 * n_max / 3; ++i)
      middle += sys.vectors[j][i] * sys.vectors[j][i];
    if (near >= 0.9) {
      out.edge_omegas.push_back(sys.values[j]);
    } else if (far < 0.9 && middle > 0.1) {
      // extended through the strip depth: genuine bulk. States localized at
      // either boundary with < 0.9 weight (long evanescent tails near gap
      // edges) are dropped so they cannot fragment the gap.
      out.bulk_omegas.push_back(sys.values[j]);
    }
  }
  return out;
}

struct BranchData {
  std::vector<double> k, w;
  std::vector<std::pair<double, double>> bands;
  std::pair<double, double> gap;
};

BranchData compute_branch(double phi, double kappa, int n_max,
                          const std::vector<double>& k_grid, GapSelector which) {
  std::vector<KSpectrum> spectra(k_grid.size());
  parallel_for(static_cast<int>(k_grid.size()),
               [&](int i) { spectra[i] = solve_column(phi, kappa, n_max, k_grid[i]); });

  std::vector<double> bulk;
  for (const auto& s : spectra) bulk.insert(bulk.end(), s.bulk_omegas.begin(), s.bulk_omegas.end());
  std::sort(bulk.begin(), bulk.end());
  if (bulk.empty()) throw NoGapError("harper_edge_modes: no bulk spectrum found");

  const double gap_threshold = 0.3 * std::abs(kappa);
  BranchData out;
  std::vector<std::pair<double, double>> gaps;
  double lo = bulk.front();
  for (size_t i = 0; i + 1 < bulk.size(); ++i) {
    if (bulk[i + 1] - bulk[i] > gap_threshold) {
      out.bands.push_back({lo, bulk[i]});
      gaps.push_back({bulk[i], bulk[i + 1]});
      lo = bulk[i + 1];
    }
  }
  out.bands.push_back({lo, bulk.back()});
  if (gaps.empty())
    throw NoGapError("harper_edge_modes: bulk bands leave no gap wider than 0.3 kappa");
  out.gap = (which == GapSelector::lower) ? gaps.front() : gaps.back();

  // edge eigenvalues strictly inside the selected gap, indexed by k
  const double width = out.gap.second - out.gap.first;
  const double in_lo = out.gap.first + 0.02 * width;
  const double in_hi = out.gap.second - 0.02 * width;
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < k_grid.size(); ++i) {
    for (double w : spectra[i].edge_omegas)
      if (w > in_lo && w < in_hi) pts.push_back({k_grid[i], w});
  }
  if (pts.size() < 16)
    throw NoGapError("harper_edge_modes: no edge branch crosses the selected gap");
  std::sort(pts.begin(), pts.end());

  // longest monotone run in omega (the chiral branch; slope sign is fixed
  // within a gap)
  const bool increasing = pts.back().second > pts.front().second;
  size_t best_begin = 0, best_len = 1, begin = 0;
  for (size_t i = 1; i <= pts.size(); ++i) {
    const bool ok = i < pts.size() &&
                    (increasing ? pts[i].second > pts[i - 1].second
                                : pts[i].second < pts[i - 1].second) &&
                    pts[i].first > pts[i - 1].first;
    if (!ok) {
      if (i - begin > best_len) {
        best_len = i - begin;
        best_begin = begin;
      }
      begin = i;
    }
  }
  for (size_t i = best_begin; i < best_begin + best_len; ++i) {
    out.k.push_back(pts[i].first);
    out.w.push_back(pts[i].second);
  }
  if (out.k.size() < 16)
    throw NoGapError("harper_edge_modes: monotone edge branch too short");
  return out;
}

}  // namespace

TabulatedChiral HarperEdgeResult::tabulated() const {
  if (branch_omega.size() >= 2 && branch_omega.back() < branch_omega.front())
    throw PreconditionError(
        "HarperEdgeResult: branch has negative group velocity; the unidirectional "
        "reduction needs the positive-velocity gap");
  return TabulatedChiral(branch_k, branch_omega);
}

HarperEdgeResult harper_edge_modes(double phi, double kappa, int n_max,
                                   const std::vector<double>& k_grid, GapSelector gap,
                                   bool check_truncation) {
  if (n_max < 40) throw PreconditionError("harper_edge_modes: n_max must be >= 40");
  if (k_grid.size() < 32)
    throw PreconditionError("harper_edge_modes: need at least 32 k samples");
  for (size_t i = 0; i + 1 < k_grid.size(); ++i)
    if (!(k_grid[i + 1] > k_grid[i]))
      throw PreconditionError("harper_edge_modes: k grid must be strictly increasing");

  const BranchData branch = compute_branch(phi, kappa, n_max, k_grid, gap);
  if (check_truncation) {
    const BranchData refined = compute_branch(phi, kappa, 2 * n_max, k_grid, gap);
    // compare on the common k samples
    double drift = 0.0;
    size_t j = 0;
    for (size_t i = 0; i < branch.k.size(); ++i) {
      while (j < refined.k.size() && refined.k[j] < branch.k[i]) ++j;
      if (j < refined.k.size() && refined.k[j] == branch.k[i])
        drift = std::max(drift, std::abs(refined.w[j] - branch.w[i]));
    }
    if (drift > 1e-6)
      throw TruncationError("harper_edge_modes: branch shifts by > 1e-6 when n_max doubles");
  }

  HarperEdgeResult out;
  out.branch_k = branch.k;
  out.branch_omega = branch.w;
  out.bulk_bands = branch.bands;
  out.gap = branch.gap;
  return out;
}

// ---------------------------------------------------------------------------
// Exact strip integration
// ---------------------------------------------------------------------------

namespace {

class StripSystem {
 public:
  StripSystem(double phi, double kappa, StripGeometry g,
              const std::vector<StripAttachment>& att)
      : phi_(phi), kappa_(kappa), g_(g), att_(att) {
    // <n,m+1|H|n,m> = kappa e^{-i phi n}: the gauge for which the edge
    // branch of the A_0 = 0 eigenproblem (plane waves ~ e^{+ikm}) carries
    // positive group velocity toward larger m, so that downstream means
    // increasing site index exactly as in the effective reduction.
    phase_.resize(g_.l_n);
    for (int n = 1; n <= g_.l_n; ++n)
      phase_[n - 1] = std::exp(cplx(0.0, -phi_ * n));
  }

  int bath_size() const { return g_.l_n * g_.l_m; }
  int size() const { return bath_size() + static_cast<int>(att_.size()); }

  // dst = H src ; layout: bath row-major then levels
  void apply(const std::vector<cplx>& src, std::vector<cplx>& dst) const {
    const int ln = g_.l_n, lm = g_.l_m;
    for (int n = 0; n < ln; ++n) {
      const cplx ph = phase_[n];
      const cplx phc = std::conj(ph);
      const int row = n * lm;
      const int up = row - lm, down = row + lm;
      for (int m = 0; m < lm; ++m) {
        cplx acc = 0.0;
        if (n > 0) acc += kappa_ * src[up + m];
        if (n + 1 < ln) acc += kappa_ * src[down + m];
        if (m > 0) acc += kappa_ * ph * src[row + m - 1];
        if (m + 1 < lm) acc += kappa_ * phc * src[row + m + 1];
        dst[row + m] = acc;
      }
    }
    const int nb = bath_size();
    for (size_t a = 0; a < att_.size(); ++a) {
      const auto& at = att_[a];
      const int site = (at.n - 1) * lm + at.m;
      dst[nb + a] = at.omega * src[nb + a] + at.kappa * src[site];
      dst[site] += at.kappa * src[nb + a];
    }
  }

  double far_boundary_weight(const std::vector<cplx>& y) const {
    const int lm = g_.l_m;
    const int guard = std::min(5, lm);
    double w = 0.0;
    for (int n = 0; n < g_.l_n; ++n)
      for (int m = lm - guard; m < lm; ++m) w += std::norm(y[n * lm + m]);
    return w;
  }

 private:
  double phi_, kappa_;
  StripGeometry g_;
  std::vector<StripAttachment> att_;
  std::vector<cplx> phase_;
};

}  // namespace

ExactTrace hofstadter_evolve(double phi, double kappa, StripGeometry strip,
                             const std::vector<StripAttachment>& attachments,
                             const std::vector<cplx>& c0, const std::vector<double>& times,
                             double dt) {
  if (strip.l_n < 2 || strip.l_m < 8)
    throw PreconditionError("hofstadter_evolve: strip too small");
  if (attachments.empty()) throw PreconditionError("hofstadter_evolve: need attachments");
  if (c0.size() != attachments.size())
    throw DimensionMismatchError("hofstadter_evolve: c0 size != number of levels");
  double kmax = 0.0;
  std::set<std::pair<int, int>> seen;
  for (const auto& a : attachments) {
    if (a.n < 1 || a.n > strip.l_n || a.m < 0 || a.m >= strip.l_m)
      throw PreconditionError("hofstadter_evolve: attachment outside the strip");
    if (!seen.insert({a.n, a.m}).second)
      throw DuplicateSiteError("hofstadter_evolve: duplicate attachment site");
    kmax = std::max(kmax, std::abs(a.kappa));
  }
  if (!(dt > 0.0) || dt > 0.05 / (4.0 * std::abs(kappa) + kmax))
    throw PreconditionError("hofstadter_evolve: need 0 < dt <= 0.05/(4 kappa + max kappa_a)");
  if (times.empty() || times.front() != 0.0)
    throw PreconditionError("hofstadter_evolve: time grid must start at 0");
  for (size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i + 1] > times[i]))
      throw PreconditionError("hofstadter_evolve: time grid must be increasing");
  {
    double n0 = 0.0;
    for (const auto& v : c0) n0 += std::norm(v);
    if (std::abs(n0 - 1.0) > 1e-8)
      throw PreconditionError("hofstadter_evolve: c0 must be normalized");
  }

  const StripSystem sys(phi, kappa, strip, attachments);
  const int nlev = static_cast<int>(attachments.size());
  std::vector<cplx> y(sys.size(), 0.0);
  for (int a = 0; a < nlev; ++a) y[sys.bath_size() + a] = c0[a];

  std::vector<cplx> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  auto deriv = [&](const std::vector<cplx>& src, std::vector<cplx>& dst) {
    sys.apply(src, dst);
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
  out.level_amplitudes.reserve(times.size());
  out.level_occupations.reserve(times.size());

  double t = 0.0;
  for (double target : times) {
    while (target - t > 1e-12) {
      const double h = std::min(dt, target - t);
      rk4_step(h);
      t += h;
    }
    std::vector<cplx> amps(nlev);
    std::vector<double> occ(nlev);
    for (int a = 0; a < nlev; ++a) {
      amps[a] = y[sys.bath_size() + a];
      occ[a] = std::norm(amps[a]);
    }
    out.level_amplitudes.push_back(std::move(amps));
    out.level_occupations.push_back(std::move(occ));
    double norm = 0.0;
    for (const auto& v : y) norm += std::norm(v);
    out.norm_drift = std::max(out.norm_drift, std::abs(norm - 1.0));
    if (sys.far_boundary_weight(y) > 1e-6)
      throw BoundaryReachedError(
          "hofstadter_evolve: wavefront reached the far m-boundary (enlarge l_m)");
  }

  out.final_state.bath_amplitudes.assign(y.begin(), y.begin() + sys.bath_size());
  out.final_state.level_amplitudes.assign(y.begin() + sys.bath_size(), y.end());
  out.final_state.geometry = strip;
  out.final_state.time = t;
  return out;
}

}  // namespace chiraldecay::baths
