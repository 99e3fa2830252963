#include "mbo/matgeom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mbo/error.hpp"

namespace mbo {

SmallMatrix::SmallMatrix(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) fail(ErrorKind::InvalidInput, "matrix dimension must be in [1, 3]");
}

SmallMatrix::SmallMatrix(int n, std::initializer_list<double> rowmajor) : SmallMatrix(n) {
  if (static_cast<int>(rowmajor.size()) != n * n)
    fail(ErrorKind::DimensionMismatch, "expected " + std::to_string(n * n) + " entries");
  std::copy(rowmajor.begin(), rowmajor.end(), a_.begin());
}

SmallMatrix SmallMatrix::identity(int n) {
  SmallMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SmallMatrix SmallMatrix::diag(std::initializer_list<double> d) {
  SmallMatrix m(static_cast<int>(d.size()));
  int i = 0;
  for (double x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

SmallMatrix SmallMatrix::rotation2(double alpha) {
  double c = std::cos(alpha), s = std::sin(alpha);
  return SmallMatrix(2, {c, -s, s, c});
}

SmallMatrix SmallMatrix::reflection2(double alpha) {
  double c = std::cos(alpha), s = std::sin(alpha);
  return SmallMatrix(2, {c, s, s, -c});
}

SmallMatrix SmallMatrix::transpose() const {
  SmallMatrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool SmallMatrix::finite() const {
  for (int k = 0; k < size(); ++k)
    if (!std::isfinite(a_[k])) return false;
  return true;
}

static void require_same(const SmallMatrix& a, const SmallMatrix& b) {
  if (a.n() != b.n()) fail(ErrorKind::DimensionMismatch, "matrix dimensions differ");
}

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
  require_same(a, b);
  int n = a.n();
  SmallMatrix c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

SmallMatrix operator+(const SmallMatrix& a, const SmallMatrix& b) {
  require_same(a, b);
  SmallMatrix c(a.n());
  for (int k = 0; k < a.size(); ++k) c.data()[k] = a.data()[k] + b.data()[k];
  return c;
}

SmallMatrix operator-(const SmallMatrix& a, const SmallMatrix& b) {
  require_same(a, b);
  SmallMatrix c(a.n());
  for (int k = 0; k < a.size(); ++k) c.data()[k] = a.data()[k] - b.data()[k];
  return c;
}

SmallMatrix operator*(double s, const SmallMatrix& a) {
  SmallMatrix c(a.n());
  for (int k = 0; k < a.size(); ++k) c.data()[k] = s * a.data()[k];
  return c;
}

bool operator==(const SmallMatrix& a, const SmallMatrix& b) {
  if (a.n() != b.n()) return false;
  for (int k = 0; k < a.size(); ++k)
    if (a.data()[k] != b.data()[k]) return false;
  return true;
}

double det(const SmallMatrix& a) {
  switch (a.n()) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    default:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}

double frobenius_inner(const SmallMatrix& a, const SmallMatrix& b) {
  require_same(a, b);
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a.data()[k] * b.data()[k];
  return s;
}

double frobenius_norm(const SmallMatrix& a) { return std::sqrt(frobenius_inner(a, a)); }

double frobenius_dist(const SmallMatrix& a, const SmallMatrix& b) { return frobenius_norm(a - b); }

double orthogonality_defect(const SmallMatrix& a) {
  return frobenius_norm(a.transpose() * a - SmallMatrix::identity(a.n()));
}

namespace {

SvdResult svd1(const SmallMatrix& a) {
  SvdResult r{SmallMatrix(1), {}, SmallMatrix::identity(1)};
  r.u(0, 0) = a(0, 0) < 0.0 ? -1.0 : 1.0;
  r.sigma[0] = std::abs(a(0, 0));
  return r;
}

// a = R(phi) diag(sx, sy) R(theta), sx >= |sy|.
SvdResult svd2(const SmallMatrix& a) {
  double e = 0.5 * (a(0, 0) + a(1, 1));
  double f = 0.5 * (a(0, 0) - a(1, 1));
  double g = 0.5 * (a(1, 0) + a(0, 1));
  double h = 0.5 * (a(1, 0) - a(0, 1));
  double q = std::hypot(e, h);
  double r = std::hypot(f, g);
  double sx = q + r;
  double sy = q - r;
  double a1 = std::atan2(g, f);
  double a2 = std::atan2(h, e);
  double theta = 0.5 * (a2 - a1);
  double phi = 0.5 * (a2 + a1);

  SvdResult out;
  out.u = SmallMatrix::rotation2(phi);
  out.v = SmallMatrix::rotation2(-theta);
  out.sigma[0] = sx;
  out.sigma[1] = std::abs(sy);
  if (sy < 0.0) {
    out.u(0, 1) = -out.u(0, 1);
    out.u(1, 1) = -out.u(1, 1);
  }
  return out;
}

void negate_col(SmallMatrix& m, int j) {
  for (int i = 0; i < m.n(); ++i) m(i, j) = -m(i, j);
}

// One-sided Jacobi on the columns of a.
SvdResult svd_jacobi(const SmallMatrix& a) {
  const int n = a.n();
  SmallMatrix w = a;
  SmallMatrix v = SmallMatrix::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < n; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-14 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (int i = 0; i < n; ++i) {
          double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
          double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    if (!rotated) break;
  }

  std::array<double, kMaxDim> norms{};
  std::array<int, kMaxDim> order{};
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w(i, j) * w(i, j);
    norms[j] = std::sqrt(s);
    order[j] = j;
  }
  std::stable_sort(order.begin(), order.begin() + n, [&](int x, int y) { return norms[x] > norms[y]; });

  SvdResult r{SmallMatrix(n), {}, SmallMatrix(n)};
  for (int k = 0; k < n; ++k) {
    int j = order[k];
    r.sigma[k] = norms[j];
    for (int i = 0; i < n; ++i) r.v(i, k) = v(i, j);
  }

  // Orthonormal u by Gram-Schmidt on w; degenerate columns are completed from the standard basis.
  for (int k = 0; k < n; ++k) {
    int j = order[k];
    std::array<double, kMaxDim> col{};
    bool ok = false;
    if (r.sigma[k] > 0.0) {
      for (int i = 0; i < n; ++i) col[i] = w(i, j) / r.sigma[k];
      for (int pass = 0; pass < 2; ++pass)
        for (int m = 0; m < k; ++m) {
          double d = 0.0;
          for (int i = 0; i < n; ++i) d += r.u(i, m) * col[i];
          for (int i = 0; i < n; ++i) col[i] -= d * r.u(i, m);
        }
      double nn = 0.0;
      for (int i = 0; i < n; ++i) nn += col[i] * col[i];
      nn = std::sqrt(nn);
      if (nn > 0.5) {
        for (int i = 0; i < n; ++i) col[i] /= nn;
        ok = true;
      }
    }
    for (int e = 0; !ok && e < n; ++e) {
      col.fill(0.0);
      col[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int m = 0; m < k; ++m) {
          double d = 0.0;
          for (int i = 0; i < n; ++i) d += r.u(i, m) * col[i];
          for (int i = 0; i < n; ++i) col[i] -= d * r.u(i, m);
        }
      double nn = 0.0;
      for (int i = 0; i < n; ++i) nn += col[i] * col[i];
      nn = std::sqrt(nn);
      if (nn > 0.5) {
        for (int i = 0; i < n; ++i) col[i] /= nn;
        ok = true;
      }
    }
    for (int i = 0; i < n; ++i) r.u(i, k) = col[i];
  }

  if (n == 3) {
    // Exact orthogonality for the last column; sign follows the data.
    double cx = r.u(1, 0) * r.u(2, 1) - r.u(2, 0) * r.u(1, 1);
    double cy = r.u(2, 0) * r.u(0, 1) - r.u(0, 0) * r.u(2, 1);
    double cz = r.u(0, 0) * r.u(1, 1) - r.u(1, 0) * r.u(0, 1);
    double sgn = cx * r.u(0, 2) + cy * r.u(1, 2) + cz * r.u(2, 2) < 0.0 ? -1.0 : 1.0;
    r.u(0, 2) = sgn * cx;
    r.u(1, 2) = sgn * cy;
    r.u(2, 2) = sgn * cz;
  }

  if (det(r.v) < 0.0) {
    negate_col(r.v, n - 1);
    negate_col(r.u, n - 1);
  }
  if (r.sigma[n - 1] == 0.0 && det(r.u) < 0.0) negate_col(r.u, n - 1);
  return r;
}

SmallMatrix u_d_vt(const SvdResult& s, bool flip_last) {
  int n = s.u.n();
  SmallMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        double d = (flip_last && k == n - 1) ? -1.0 : 1.0;
        acc += s.u(i, k) * d * s.v(j, k);
      }
      out(i, j) = acc;
    }
  return out;
}

double dist_sq_core(const SvdResult& s, int n) {
  double d = 0.0;
  for (int k = 0; k < n; ++k) d += (s.sigma[k] - 1.0) * (s.sigma[k] - 1.0);
  return d;
}

bool u_is_proper(const SvdResult& s) { return det(s.u) > 0.0; }

}  // namespace

SvdResult svd(const SmallMatrix& a) {
  if (a.n() < 1) fail(ErrorKind::InvalidInput, "empty matrix");
  if (!a.finite()) fail(ErrorKind::InvalidInput, "svd: non-finite entries");
  switch (a.n()) {
    case 1:
      return svd1(a);
    case 2:
      return svd2(a);
    default:
      return svd_jacobi(a);
  }
}

Projection nearest_orthogonal(const SmallMatrix& a) {
  SvdResult s = svd(a);
  return {u_d_vt(s, false), dist_sq_core(s, a.n())};
}

Projection nearest_opposite(const SmallMatrix& a) {
  if (det(a) == 0.0) fail(ErrorKind::DegenerateDeterminant, "nearest_opposite: singular matrix");
  SvdResult s = svd(a);
  int n = a.n();
  return {u_d_vt(s, true), dist_sq_core(s, n) + 4.0 * s.sigma[n - 1]};
}

PlusMinus plus_minus(const SmallMatrix& a) {
  SvdResult s = svd(a);
  PlusMinus pm;
  pm.singular = det(a) == 0.0;
  SmallMatrix keep = u_d_vt(s, false);
  SmallMatrix flip = u_d_vt(s, true);
  if (u_is_proper(s)) {
    pm.plus = keep;
    pm.minus = flip;
  } else {
    pm.plus = flip;
    pm.minus = keep;
  }
  return pm;
}

SmallMatrix t_plus(const SmallMatrix& a) {
  if (det(a) == 0.0) fail(ErrorKind::DegenerateDeterminant, "t_plus: singular matrix");
  return plus_minus(a).plus;
}

SmallMatrix t_minus(const SmallMatrix& a) {
  if (det(a) == 0.0) fail(ErrorKind::DegenerateDeterminant, "t_minus: singular matrix");
  return plus_minus(a).minus;
}

}  // namespace mbo
