#include "terrex/traversability/symmetric_eigen3.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace terrex {

namespace {

constexpr double kDegenerateRatio = 1e-12;

Vec3 eigenvalues_desc(const Mat3& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  if (p1 == 0.0) {
    Vec3 d = a.diagonal();
    std::sort(d.data(), d.data() + 3, std::greater<>());
    return d;
  }
  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Mat3 b = (a - q * Mat3::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double l1 = q + 2.0 * p * std::cos(phi);
  const double l3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
  const double l2 = 3.0 * q - l1 - l3;
  Vec3 out(l1, l2, l3);
  std::sort(out.data(), out.data() + 3, std::greater<>());
  return out;
}

// Null vector of (A - lambda I) from the best-conditioned row cross product.
// Returns false when the matrix has rank < 2 (repeated eigenvalue).
bool null_vector(const Mat3& a, double lambda, Vec3& out) {
  const Mat3 m = a - lambda * Mat3::Identity();
  const std::array<Vec3, 3> c{m.row(0).transpose().cross(m.row(1).transpose()),
                              m.row(0).transpose().cross(m.row(2).transpose()),
                              m.row(1).transpose().cross(m.row(2).transpose())};
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (c[k].squaredNorm() > c[best].squaredNorm()) best = k;
  const double n2 = c[best].squaredNorm();
  const double scale = m.squaredNorm();
  if (n2 <= 1e-28 * scale * scale || n2 == 0.0) return false;
  out = c[best] / std::sqrt(n2);
  return true;
}

Vec3 any_orthogonal(const Vec3& v) { return v.unitOrthogonal(); }

}  // namespace

SymmetricEigen3 eigen_symmetric3(const Mat3& a) {
  SymmetricEigen3 out;
  out.values = eigenvalues_desc(a);
  const double l1 = out.values(0), l2 = out.values(1), l3 = out.values(2);
  const double span = std::max(std::abs(l1), std::abs(l3));

  if (span == 0.0 || (l1 - l3) <= kDegenerateRatio * span) {
    out.vectors = Mat3::Identity();
    return out;
  }
  Vec3 v1, v3;
  const bool top_ok = (l1 - l2) > kDegenerateRatio * span && null_vector(a, l1, v1);
  const bool low_ok = (l2 - l3) > kDegenerateRatio * span && null_vector(a, l3, v3);
  if (top_ok && low_ok) {
    // Re-orthogonalize so that the basis is exactly orthonormal.
    v3 = (v3 - v3.dot(v1) * v1).normalized();
  } else if (top_ok) {
    v3 = any_orthogonal(v1);
  } else if (low_ok) {
    v1 = any_orthogonal(v3);
  } else {
    out.vectors = Mat3::Identity();
    return out;
  }
  out.vectors.col(0) = v1;
  out.vectors.col(1) = v3.cross(v1);
  out.vectors.col(2) = v3;
  return out;
}

Vec3 smallest_eigenvector(const Mat3& a) {
  const Vec3 l = eigenvalues_desc(a);
  const double span = std::max(std::abs(l(0)), std::abs(l(2)));
  if (span == 0.0 || (l(0) - l(2)) <= kDegenerateRatio * span) return Vec3::UnitZ();

  if (l(1) - l(2) < kDegenerateRatio * l(0)) {
    // Two smallest eigenvalues coincide: pick the most vertical member of the
    // plane orthogonal to the dominant eigenvector.
    Vec3 v1;
    if (!null_vector(a, l(0), v1)) return Vec3::UnitZ();
    const Vec3 w = Vec3::UnitZ() - v1.z() * v1;
    if (w.norm() < 1e-12) return any_orthogonal(v1);
    return w.normalized();
  }
  Vec3 v3;
  if (null_vector(a, l(2), v3)) return v3;
  return Vec3::UnitZ();
}

}  // namespace terrex
