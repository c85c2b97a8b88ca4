#include "chiraldecay/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace chiraldecay::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& m, const char* who) {
  if (!m.square()) throw NonSquareError(std::string(who) + ": matrix must be square");
}

// Deterministic xorshift64* stream for test-independent choices (inverse
// iteration right-hand sides, power-iteration seeds).
struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return static_cast<double>((s * 0x2545f4914f6cdd1dull) >> 11) / 9007199254740992.0;
  }
  cplx unit() { return cplx(2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0); }
};

struct Lu {
  ComplexMatrix a;
  std::vector<int> piv;
  int swaps = 0;
  bool exact_singular = false;
};

Lu lu_factor(ComplexMatrix a, bool regularize) {
  const int n = a.rows();
  Lu lu{std::move(a), std::vector<int>(n), 0, false};
  double scale = lu.a.norm_max();
  if (scale == 0.0) scale = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(lu.a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(lu.a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    lu.piv[k] = p;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(lu.a(k, j), lu.a(p, j));
      ++lu.swaps;
    }
    cplx pivot = lu.a(k, k);
    if (pivot == 0.0) {
      lu.exact_singular = true;
      if (!regularize) continue;
    }
    if (regularize && std::abs(pivot) < kEps * scale) {
      pivot = (pivot == 0.0) ? cplx(kEps * scale, 0.0)
                             : pivot * (kEps * scale / std::abs(pivot));
      lu.a(k, k) = pivot;
    }
    if (lu.a(k, k) == 0.0) continue;
    const cplx inv = 1.0 / lu.a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const cplx l = lu.a(i, k) * inv;
      lu.a(i, k) = l;
      if (l == 0.0) continue;
      for (int j = k + 1; j < n; ++j) lu.a(i, j) -= l * lu.a(k, j);
    }
  }
  return lu;
}

void lu_solve_inplace(const Lu& lu, std::vector<cplx>& b) {
  const int n = lu.a.rows();
  for (int k = 0; k < n; ++k)
    if (lu.piv[k] != k) std::swap(b[k], b[lu.piv[k]]);
  for (int i = 1; i < n; ++i) {
    cplx acc = b[i];
    for (int j = 0; j < i; ++j) acc -= lu.a(i, j) * b[j];
    b[i] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {
    cplx acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= lu.a(i, j) * b[j];
    b[i] = acc / lu.a(i, i);
  }
}

// X = A^{-1} B via one factorization.
ComplexMatrix lu_solve_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int n = a.rows();
  Lu lu = lu_factor(a, true);
  ComplexMatrix x(n, n);
  std::vector<cplx> col(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = b(i, j);
    lu_solve_inplace(lu, col);
    for (int i = 0; i < n; ++i) x(i, j) = col[i];
  }
  return x;
}

enum class Tri { none, lower, upper };

Tri triangular_kind(const ComplexMatrix& m) {
  if (m.is_lower_triangular()) return Tri::lower;
  if (m.is_upper_triangular()) return Tri::upper;
  return Tri::none;
}

void enforce_triangle(ComplexMatrix& m, Tri t) {
  const int n = m.rows();
  if (t == Tri::lower) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m(i, j) = 0.0;
  } else if (t == Tri::upper) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) m(i, j) = 0.0;
  }
}

ComplexMatrix expm_taylor30(const ComplexMatrix& m) {
  const int n = m.rows();
  ComplexMatrix p = ComplexMatrix::identity(n);
  for (int j = 30; j >= 1; --j) {
    p = m * p;
    p *= cplx(1.0 / j, 0.0);
    for (int i = 0; i < n; ++i) p(i, i) += 1.0;
  }
  return p;
}

ComplexMatrix expm_pade13(const ComplexMatrix& m, int squarings) {
  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};
  const int n = m.rows();
  ComplexMatrix a = m;
  a *= cplx(std::ldexp(1.0, -squarings), 0.0);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix id = ComplexMatrix::identity(n);

  ComplexMatrix w = cplx(b[13], 0) * a6 + cplx(b[11], 0) * a4 + cplx(b[9], 0) * a2;
  ComplexMatrix u = a6 * w + cplx(b[7], 0) * a6 + cplx(b[5], 0) * a4 + cplx(b[3], 0) * a2 +
                    cplx(b[1], 0) * id;
  u = a * u;
  ComplexMatrix w2 = cplx(b[12], 0) * a6 + cplx(b[10], 0) * a4 + cplx(b[8], 0) * a2;
  ComplexMatrix v = a6 * w2 + cplx(b[6], 0) * a6 + cplx(b[4], 0) * a4 + cplx(b[2], 0) * a2 +
                    cplx(b[0], 0) * id;

  ComplexMatrix r = lu_solve_matrix(v - u, v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& m, double norm_cap) {
  require_square(m, "expm");
  if (!m.all_finite()) throw NumericalFailureError("expm: input has non-finite entries");
  const double n1 = m.norm_one();
  if (n1 > norm_cap) throw OverflowError("expm: ||M||_1 exceeds cap");
  const Tri tri = triangular_kind(m);

  ComplexMatrix r;
  if (n1 < 0.5) {
    r = expm_taylor30(m);
  } else {
    const double theta13 = 5.371920351148152;
    int s = 0;
    if (n1 > theta13) s = static_cast<int>(std::ceil(std::log2(n1 / theta13)));
    r = expm_pade13(m, s);
  }
  enforce_triangle(r, tri);  // exp preserves triangular structure exactly
  return r;
}

// ---------------------------------------------------------------------------
// Eigenvalues: Hessenberg + complex shifted QR
// ---------------------------------------------------------------------------

namespace {

void hessenberg_reduce(ComplexMatrix& h) {
  const int n = h.rows();
  for (int k = 0; k + 2 < n; ++k) {
    double colnorm = 0.0;
    for (int i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
    colnorm = std::sqrt(colnorm);
    if (colnorm == 0.0) continue;
    cplx x0 = h(k + 1, k);
    cplx alpha = (x0 == 0.0) ? cplx(-colnorm, 0.0) : -(x0 / std::abs(x0)) * colnorm;
    std::vector<cplx> v(n, 0.0);
    for (int i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    double vn = 0.0;
    for (int i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    if (vn == 0.0) continue;
    vn = std::sqrt(vn);
    for (int i = k + 1; i < n; ++i) v[i] /= vn;
    // H <- (I - 2 v v^H) H
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
      s *= 2.0;
      for (int i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
    }
    // H <- H (I - 2 v v^H)
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      s *= 2.0;
      for (int j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
    }
    // clean the annihilated part of the column
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Eigenvalue of trailing 2x2 closest to its (1,1) element.
cplx wilkinson_shift(const ComplexMatrix& h, int m) {
  const cplx a = h(m - 1, m - 1), b = h(m - 1, m), c = h(m, m - 1), d = h(m, m);
  const cplx tr = a + d;
  const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
  const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

std::vector<cplx> qr_eigenvalues(ComplexMatrix h, int max_sweeps_per_eig) {
  const int n = h.rows();
  std::vector<cplx> ev(n);
  hessenberg_reduce(h);
  int m = n - 1;
  int stalls = 0;
  long total = 0;
  const long cap = static_cast<long>(max_sweeps_per_eig) * n + 50;
  std::vector<double> cs(n);
  std::vector<cplx> sn(n);
  while (m >= 0) {
    // deflation scan
    int l = m;
    while (l > 0) {
      const double small = kEps * (std::abs(h(l - 1, l - 1)) + std::abs(h(l, l)));
      if (std::abs(h(l, l - 1)) <= std::max(small, 1e-300)) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == m) {
      ev[m] = h(m, m);
      --m;
      stalls = 0;
      continue;
    }
    if (++total > cap) throw NoConvergenceError("eigvals: QR iteration cap exceeded");
    cplx sigma;
    if (++stalls % 12 == 0) {
      sigma = h(m, m) + cplx(std::abs(h(m, m - 1)) + std::abs(h(m - 1, m - 2 >= 0 ? m - 2 : 0)), 0.0);
    } else {
      sigma = wilkinson_shift(h, m);
    }
    for (int i = l; i <= m; ++i) h(i, i) -= sigma;
    // QR by Givens on rows l..m, then RQ
    for (int i = l; i < m; ++i) {
      const cplx x = h(i, i), y = h(i + 1, i);
      const double r = std::hypot(std::abs(x), std::abs(y));
      double c;
      cplx s;
      if (r == 0.0) {
        c = 1.0;
        s = 0.0;
      } else {
        c = std::abs(x) / r;
        const cplx phase = (x == 0.0) ? cplx(1.0, 0.0) : x / std::abs(x);
        s = phase * std::conj(y) / r;
      }
      cs[i] = c;
      sn[i] = s;
      for (int j = i; j < n; ++j) {
        const cplx hi = h(i, j), hk = h(i + 1, j);
        h(i, j) = c * hi + s * hk;
        h(i + 1, j) = -std::conj(s) * hi + c * hk;
      }
      h(i + 1, i) = 0.0;
    }
    for (int i = l; i < m; ++i) {
      const double c = cs[i];
      const cplx s = sn[i];
      const int top = std::min(i + 2, m);
      for (int r2 = 0; r2 <= top; ++r2) {
        const cplx hi = h(r2, i), hk = h(r2, i + 1);
        h(r2, i) = c * hi + std::conj(s) * hk;
        h(r2, i + 1) = -s * hi + c * hk;
      }
    }
    for (int i = l; i <= m; ++i) h(i, i) += sigma;
  }
  return ev;
}

}  // namespace

std::vector<cplx> solve_regularized(ComplexMatrix a, std::vector<cplx> b) {
  Lu lu = lu_factor(std::move(a), true);
  lu_solve_inplace(lu, b);
  return b;
}

EigvalsResult eigvals(const ComplexMatrix& m, int max_sweeps_per_eig) {
  require_square(m, "eigvals");
  const int n = m.rows();
  EigvalsResult out;
  const Tri tri = triangular_kind(m);
  if (tri != Tri::none) {
    out.values.resize(n);
    for (int i = 0; i < n; ++i) out.values[i] = m(i, i);
  } else {
    out.values = qr_eigenvalues(m, max_sweeps_per_eig);
  }

  // Condition of the eigenvector basis via inverse iteration. Perturb
  // repeated eigenvalues so each solve is distinct; a defective spectrum
  // still produces nearly parallel vectors and a huge condition number.
  const double scale = std::max(m.norm_max(), 1.0);
  Rng rng(0x5eedu + static_cast<uint64_t>(n));
  ComplexMatrix vbasis(n, n);
  for (int j = 0; j < n; ++j) {
    const cplx shift = out.values[j] + scale * 1e-8 * cplx(1.0 + j, 0.5);
    ComplexMatrix a = m;
    for (int i = 0; i < n; ++i) a(i, i) -= shift;
    std::vector<cplx> x(n);
    for (auto& v : x) v = rng.unit();
    for (int it = 0; it < 2; ++it) {
      x = solve_regularized(a, std::move(x));
      const double nx = norm2(x);
      if (nx == 0.0 || !std::isfinite(nx)) break;
      for (auto& v : x) v /= nx;
    }
    for (int i = 0; i < n; ++i) vbasis(i, j) = x[i];
  }
  const std::vector<double> sv = singular_values(vbasis);
  const double smin = sv.back(), smax = sv.front();
  out.condition_estimate = (smin > 0.0) ? smax / smin : 1e300;
  out.condition_warning = out.condition_estimate > 1e8;
  return out;
}

// ---------------------------------------------------------------------------
// Largest singular value (as largest eigenvalue of M^dag M)
// ---------------------------------------------------------------------------

LargestSingularResult largest_singular(const ComplexMatrix& m) {
  require_square(m, "largest_singular");
  const int n = m.rows();
  const ComplexMatrix b = m.adjoint() * m;
  LargestSingularResult out;
  out.vector.assign(n, 0.0);
  if (n == 1) {
    out.sigma = b(0, 0).real();
    out.vector[0] = 1.0;
    return out;
  }
  if (b.norm_max() == 0.0) {
    out.sigma = 0.0;
    out.vector[0] = 1.0;
    return out;
  }
  // Sharpen the spectral gap: repeatedly square the (normalized) Hermitian
  // matrix, then run plain power iteration. Near-degenerate leading
  // eigenvalues of A^dag A are common in the quiescent regime, where a bare
  // power iteration stalls.
  ComplexMatrix c = b;
  for (int s = 0; s < 24; ++s) {
    c *= cplx(1.0 / c.norm_max(), 0.0);
    c = c * c;
    if (!c.all_finite()) throw NumericalFailureError("largest_singular: squaring diverged");
  }
  Rng rng(0x51f6a14ull);
  std::vector<cplx> x(n);
  for (auto& v : x) v = rng.unit();
  double nx = norm2(x);
  for (auto& v : x) v /= nx;
  for (int it = 0; it < 80; ++it) {
    std::vector<cplx> y = c.apply(x);
    const double ny = norm2(y);
    if (ny == 0.0) break;  // x fell in the null space; restart deterministic
    for (auto& v : y) v /= ny;
    double drift = 0.0;
    for (int i = 0; i < n; ++i) drift = std::max(drift, std::abs(y[i] - x[i]));
    // sign/phase ambiguity: align before comparing
    cplx ov = dot(x, y);
    if (std::abs(ov) > 0.0) {
      const cplx ph = ov / std::abs(ov);
      drift = 0.0;
      for (int i = 0; i < n; ++i) drift = std::max(drift, std::abs(y[i] - ph * x[i]));
    }
    x = std::move(y);
    if (drift < 1e-14) break;
  }
  // Rayleigh polish on the original matrix; tolerance 1e-12.
  double rho = std::real(dot(x, b.apply(x)));
  for (int it = 0; it < 200; ++it) {
    std::vector<cplx> y = b.apply(x);
    const double ny = norm2(y);
    if (ny == 0.0) break;
    for (auto& v : y) v /= ny;
    const double rho2 = std::real(dot(y, b.apply(y)));
    x = std::move(y);
    if (std::abs(rho2 - rho) <= 1e-12 * std::max(1.0, std::abs(rho2))) {
      rho = rho2;
      out.sigma = rho;
      out.vector = x;
      return out;
    }
    rho = rho2;
  }
  throw NoConvergenceError("largest_singular: power iteration did not stabilize");
}

// ---------------------------------------------------------------------------
// Singular values via one-sided complex Jacobi
// ---------------------------------------------------------------------------

std::vector<double> singular_values(const ComplexMatrix& m) {
  const int rows = m.rows(), cols = m.cols();
  // columns as working vectors
  std::vector<std::vector<cplx>> w(cols, std::vector<cplx>(rows));
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) w[j][i] = m(i, j);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        cplx g = 0.0;
        double a = 0.0, bb = 0.0;
        for (int i = 0; i < rows; ++i) {
          g += std::conj(w[p][i]) * w[q][i];
          a += std::norm(w[p][i]);
          bb += std::norm(w[q][i]);
        }
        const double ag = std::abs(g);
        if (a == 0.0 || bb == 0.0 || ag <= 1e-15 * std::sqrt(a * bb)) continue;
        off = std::max(off, ag / std::sqrt(a * bb));
        const cplx phase = g / ag;
        const double zeta = (bb - a) / (2.0 * ag);
        const double t = ((zeta >= 0) ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double co = 1.0 / std::sqrt(1.0 + t * t);
        const double si = co * t;
        for (int i = 0; i < rows; ++i) {
          const cplx vp = w[p][i];
          const cplx vq = w[q][i] * std::conj(phase);  // rotate so overlap is real
          w[p][i] = co * vp - si * vq;
          w[q][i] = (si * vp + co * vq) * phase;
        }
      }
    }
    if (off < 1e-14) break;
  }
  std::vector<double> sv(cols);
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += std::norm(w[j][i]);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

// ---------------------------------------------------------------------------
// Determinant and permanent
// ---------------------------------------------------------------------------

cplx determinant(const ComplexMatrix& m) {
  require_square(m, "determinant");
  const int n = m.rows();
  if (triangular_kind(m) != Tri::none) {
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) p *= m(i, i);
    return p;
  }
  Lu lu = lu_factor(m, false);
  if (lu.exact_singular) return 0.0;
  cplx det = (lu.swaps % 2) ? -1.0 : 1.0;
  for (int i = 0; i < n; ++i) det *= lu.a(i, i);
  return det;
}

cplx permanent(const ComplexMatrix& m) {
  require_square(m, "permanent");
  const int n = m.rows();
  if (n > 24) throw TooLargeError("permanent: N > 24 (Ryser cost 2^N N)");
  if (n == 0) return 1.0;
  if (triangular_kind(m) != Tri::none) {
    // only the identity permutation survives; identical loop to determinant's
    // fast path so the two agree bit for bit
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) p *= m(i, i);
    return p;
  }
  std::vector<cplx> rowsum(n, 0.0);
  cplx sum = 0.0, comp = 0.0;  // Kahan accumulation of the 2^N terms
  const uint64_t end = 1ull << n;
  uint64_t gray = 0;
  for (uint64_t k = 1; k < end; ++k) {
    const int bit = std::countr_zero(k);
    const uint64_t mask = 1ull << bit;
    gray ^= mask;
    if (gray & mask) {
      for (int i = 0; i < n; ++i) rowsum[i] += m(i, bit);
    } else {
      for (int i = 0; i < n; ++i) rowsum[i] -= m(i, bit);
    }
    cplx prod = rowsum[0];
    for (int i = 1; i < n; ++i) prod *= rowsum[i];
    if (std::popcount(gray) & 1) prod = -prod;
    const cplx y = prod - comp;
    const cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (n & 1) sum = -sum;
  return sum;
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal eigensystem (implicit QL with shifts)
// ---------------------------------------------------------------------------

TridiagEigensystem symmetric_tridiag_eig(const std::vector<double>& diag,
                                         const std::vector<double>& offdiag) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(offdiag.size()) != std::max(0, n - 1))
    throw DimensionMismatchError("symmetric_tridiag_eig: offdiag must have length n-1");
  std::vector<double> d = diag;
  std::vector<double> e(n, 0.0);
  for (int i = 0; i < n - 1; ++i) e[i] = offdiag[i];
  std::vector<std::vector<double>> z(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) z[i][i] = 1.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int mm;
    do {
      for (mm = l; mm < n - 1; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= kEps * dd) break;
      }
      if (mm != l) {
        if (iter++ == 50) throw NoConvergenceError("symmetric_tridiag_eig: QL iteration cap");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        int ibreak = l - 1;
        for (int i = mm - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm] = 0.0;
            ibreak = i;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k][i + 1];
            z[k][i + 1] = s * z[k][i] + c * f;
            z[k][i] = c * z[k][i] - s * f;
          }
        }
        if (r == 0.0 && ibreak >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }

  // ascending order, vectors alongside
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
  TridiagEigensystem out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    out.values[j] = d[idx[j]];
    for (int i = 0; i < n; ++i) out.vectors[j][i] = z[i][idx[j]];
  }
  return out;
}

}  // namespace chiraldecay::numerics
