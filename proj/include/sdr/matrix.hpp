#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "sdr/errors.hpp"

namespace sdr {

/// Dense row-major rectangular matrix. Small sizes only; no view semantics.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) fail(ErrorCode::InvalidInput, "negative matrix size");
  }
  Matrix(int rows, int cols, std::vector<double> data);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix scaled(double a) const;

  std::vector<double> apply(const std::vector<double>& v) const;
  double frobenius_norm() const;
  bool all_finite() const;

 private:
  int rows_, cols_;
  std::vector<double> data_;
};

/// Dense real symmetric matrix. Symmetry is enforced at construction by
/// averaging, so near-symmetric block assemblies are absorbed silently.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(int dim);
  SymmetricMatrix(int dim, const std::vector<double>& row_major);
  explicit SymmetricMatrix(const Matrix& m);

  static SymmetricMatrix identity(int dim);
  static SymmetricMatrix diagonal(const std::vector<double>& d);

  int dim() const { return dim_; }
  double at(int i, int j) const { return data_[static_cast<size_t>(i) * dim_ + j]; }
  void set(int i, int j, double v) {
    data_[static_cast<size_t>(i) * dim_ + j] = v;
    data_[static_cast<size_t>(j) * dim_ + i] = v;
  }
  const std::vector<double>& data() const { return data_; }

  SymmetricMatrix operator+(const SymmetricMatrix& rhs) const;
  SymmetricMatrix operator-(const SymmetricMatrix& rhs) const;
  SymmetricMatrix scaled(double a) const;

  Matrix to_matrix() const;
  double frobenius_norm() const;
  bool all_finite() const;
  bool is_zero() const;

 private:
  int dim_;
  std::vector<double> data_;  // full storage, kept exactly symmetric
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix vectors;                   // column i pairs with eigenvalues[i]
};

/// Linear subspace of R^ambient_dim given by an orthonormal column basis.
/// rank 0 (no columns) is the zero subspace.
class Subspace {
 public:
  Subspace(int ambient_dim, Matrix orthonormal_basis);

  static Subspace zero(int ambient_dim);
  static Subspace full(int ambient_dim);
  /// Orthonormalizes the given spanning columns (modified Gram-Schmidt with a
  /// re-orthogonalization pass), dropping dependent columns.
  static Subspace from_spanning(int ambient_dim, const Matrix& columns,
                                double tol = 1e-10);

  int ambient_dim() const { return ambient_dim_; }
  int rank() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  Subspace orthogonal_complement() const;
  /// Projector onto the subspace, as a dense symmetric matrix.
  SymmetricMatrix projector() const;

 private:
  int ambient_dim_;
  Matrix basis_;
};

/// Frobenius norm of (I - P_V) P_U; zero iff U is contained in V.
double containment_residual(const Subspace& u, const Subspace& v);
bool subspace_contained(const Subspace& u, const Subspace& v, double tol = 1e-6);

/// Cyclic Jacobi eigendecomposition. Converges when the off-diagonal
/// Frobenius norm drops below 1e-12 * (1 + ||A||_F).
EigenDecomposition eigh(const SymmetricMatrix& a);

/// Minimum eigenvalue only (full decomposition under the hood).
double min_eigenvalue(const SymmetricMatrix& a);

double default_rank_tol(const SymmetricMatrix& a);

/// Orthonormal basis of the eigenspaces with |lambda| <= tol.
Subspace kernel_basis(const SymmetricMatrix& a, double tol);
Subspace kernel_basis(const SymmetricMatrix& a);

int rank(const SymmetricMatrix& a, double tol);

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues
/// are clamped to zero.
SymmetricMatrix psd_project(const SymmetricMatrix& a);

/// Moore-Penrose pseudoinverse; eigenvalues with |lambda| <= tol are
/// treated as exact zeros.
SymmetricMatrix pseudoinverse(const SymmetricMatrix& a, double tol);
SymmetricMatrix pseudoinverse(const SymmetricMatrix& a);

}  // namespace sdr
