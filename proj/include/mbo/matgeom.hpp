#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>

namespace mbo {

inline constexpr int kMaxDim = 3;

class SmallMatrix {
 public:
  SmallMatrix() = default;
  explicit SmallMatrix(int n);
  SmallMatrix(int n, std::initializer_list<double> rowmajor);

  static SmallMatrix identity(int n);
  static SmallMatrix diag(std::initializer_list<double> d);
  static SmallMatrix rotation2(double alpha);
  static SmallMatrix reflection2(double alpha);

  int n() const { return n_; }
  double& operator()(int i, int j) { return a_[i * n_ + j]; }
  double operator()(int i, int j) const { return a_[i * n_ + j]; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  int size() const { return n_ * n_; }

  SmallMatrix transpose() const;
  bool finite() const;

  friend SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b);
  friend SmallMatrix operator+(const SmallMatrix& a, const SmallMatrix& b);
  friend SmallMatrix operator-(const SmallMatrix& a, const SmallMatrix& b);
  friend SmallMatrix operator*(double s, const SmallMatrix& a);
  friend bool operator==(const SmallMatrix& a, const SmallMatrix& b);

 private:
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

struct SvdResult {
  SmallMatrix u;
  std::array<double, kMaxDim> sigma{};
  SmallMatrix v;
};

struct Projection {
  SmallMatrix q;
  double dist_sq = 0.0;
};

double det(const SmallMatrix& a);
double frobenius_inner(const SmallMatrix& a, const SmallMatrix& b);
double frobenius_norm(const SmallMatrix& a);
double frobenius_dist(const SmallMatrix& a, const SmallMatrix& b);
// ||a^T a - I||_F
double orthogonality_defect(const SmallMatrix& a);

// a = u diag(sigma) v^T, sigma descending and non-negative, det(v) = +1;
// a reflection, when present, lives in the last column of u.
SvdResult svd(const SmallMatrix& a);

Projection nearest_orthogonal(const SmallMatrix& a);
Projection nearest_opposite(const SmallMatrix& a);
SmallMatrix t_plus(const SmallMatrix& a);
SmallMatrix t_minus(const SmallMatrix& a);

// Shared by the MBO step: both projections from one decomposition.
struct PlusMinus {
  SmallMatrix plus;
  SmallMatrix minus;
  bool singular = false;
};
PlusMinus plus_minus(const SmallMatrix& a);

}  // namespace mbo
