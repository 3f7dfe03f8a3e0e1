#pragma once

#include "terrex/common.hpp"

namespace terrex {

/// Eigen-decomposition of a real symmetric 3x3 matrix.
struct SymmetricEigen3 {
  Vec3 values;   ///< descending: values(0) >= values(1) >= values(2)
  Mat3 vectors;  ///< column k is the unit eigenvector of values(k)
};

/// Closed-form (trigonometric) eigenvalues; eigenvectors from cross products
/// of the rows of (A - lambda I).
SymmetricEigen3 eigen_symmetric3(const Mat3& a);

/// Unit eigenvector of the smallest eigenvalue, i.e. the PCA surface normal.
///
/// When lambda2 - lambda3 < 1e-12 * lambda1 the two smallest eigenvalues are
/// treated as one eigenspace (the orthogonal complement of the dominant
/// eigenvector) and the member with the largest |z| is returned. An all-equal
/// spectrum returns e_z.
Vec3 smallest_eigenvector(const Mat3& a);

}  // namespace terrex
