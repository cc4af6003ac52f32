#include "sdr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sdr {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::VariableMismatch: return "VariableMismatch";
    case ErrorCode::UnsupportedInput: return "UnsupportedInput";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndefinedReference: return "UndefinedReference";
    case ErrorCode::CycleError: return "CycleError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownCampaign: return "UnknownCampaign";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Error";
}

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 0 || cols < 0 ||
      data_.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
    fail(ErrorCode::InvalidInput, "matrix data size mismatch");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) fail(ErrorCode::DimensionMismatch, "matrix product");
  Matrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const double a = at(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
    }
  }
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    fail(ErrorCode::DimensionMismatch, "matrix difference");
  Matrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    fail(ErrorCode::DimensionMismatch, "matrix sum");
  Matrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Matrix Matrix::scaled(double a) const {
  Matrix out = *this;
  for (double& v : out.data_) v *= a;
  return out;
}

std::vector<double> Matrix::apply(const std::vector<double>& v) const {
  if (static_cast<int>(v.size()) != cols_)
    fail(ErrorCode::DimensionMismatch, "matrix-vector product");
  std::vector<double> out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

SymmetricMatrix::SymmetricMatrix(int dim)
    : dim_(dim), data_(static_cast<size_t>(dim) * dim, 0.0) {
  if (dim < 1) fail(ErrorCode::InvalidInput, "symmetric matrix needs dim >= 1");
}

SymmetricMatrix::SymmetricMatrix(int dim, const std::vector<double>& row_major)
    : SymmetricMatrix(dim) {
  if (row_major.size() != static_cast<size_t>(dim) * dim)
    fail(ErrorCode::InvalidInput, "symmetric matrix data size mismatch");
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double v = 0.5 * (row_major[static_cast<size_t>(i) * dim + j] +
                              row_major[static_cast<size_t>(j) * dim + i]);
      set(i, j, v);
    }
}

SymmetricMatrix::SymmetricMatrix(const Matrix& m)
    : SymmetricMatrix(m.rows(), m.data()) {
  if (m.rows() != m.cols())
    fail(ErrorCode::InvalidInput, "symmetric matrix from non-square input");
}

SymmetricMatrix SymmetricMatrix::identity(int dim) {
  SymmetricMatrix s(dim);
  for (int i = 0; i < dim; ++i) s.set(i, i, 1.0);
  return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  SymmetricMatrix s(static_cast<int>(d.size()));
  for (int i = 0; i < s.dim(); ++i) s.set(i, i, d[i]);
  return s;
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& rhs) const {
  if (dim_ != rhs.dim_) fail(ErrorCode::DimensionMismatch, "symmetric sum");
  SymmetricMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& rhs) const {
  if (dim_ != rhs.dim_) fail(ErrorCode::DimensionMismatch, "symmetric difference");
  SymmetricMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

SymmetricMatrix SymmetricMatrix::scaled(double a) const {
  SymmetricMatrix out = *this;
  for (double& v : out.data_) v *= a;
  return out;
}

Matrix SymmetricMatrix::to_matrix() const { return Matrix(dim_, dim_, data_); }

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool SymmetricMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool SymmetricMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return v == 0.0; });
}

Subspace::Subspace(int ambient_dim, Matrix orthonormal_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (ambient_dim < 1) fail(ErrorCode::InvalidInput, "subspace ambient dim");
  if (basis_.rows() != ambient_dim || basis_.cols() > ambient_dim)
    fail(ErrorCode::InvalidInput, "subspace basis shape");
  const int r = basis_.cols();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double dot = 0.0;
      for (int k = 0; k < ambient_dim; ++k)
        dot += basis_.at(k, i) * basis_.at(k, j);
      const double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - want) > 1e-12)
        fail(ErrorCode::InvalidInput, "subspace basis not orthonormal");
    }
}

Subspace Subspace::zero(int ambient_dim) {
  return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(ambient_dim, Matrix::identity(ambient_dim));
}

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns whose
// remainder falls below tol * (1 + original norm) are dropped.
Matrix orthonormalize_columns(int ambient, const Matrix& cols, double tol) {
  std::vector<std::vector<double>> kept;
  for (int j = 0; j < cols.cols(); ++j) {
    std::vector<double> v(ambient);
    double norm0 = 0.0;
    for (int i = 0; i < ambient; ++i) {
      v[i] = cols.at(i, j);
      norm0 += v[i] * v[i];
    }
    norm0 = std::sqrt(norm0);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) {
        double dot = 0.0;
        for (int i = 0; i < ambient; ++i) dot += q[i] * v[i];
        for (int i = 0; i < ambient; ++i) v[i] -= dot * q[i];
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm <= tol * (1.0 + norm0)) continue;
    for (double& x : v) x /= norm;
    kept.push_back(std::move(v));
  }
  Matrix out(ambient, static_cast<int>(kept.size()));
  for (int j = 0; j < out.cols(); ++j)
    for (int i = 0; i < ambient; ++i) out.at(i, j) = kept[j][i];
  return out;
}

}  // namespace

Subspace Subspace::from_spanning(int ambient_dim, const Matrix& columns,
                                 double tol) {
  if (columns.rows() != ambient_dim)
    fail(ErrorCode::InvalidInput, "spanning columns have wrong ambient dim");
  if (!columns.all_finite())
    fail(ErrorCode::InvalidInput, "spanning columns not finite");
  return Subspace(ambient_dim, orthonormalize_columns(ambient_dim, columns, tol));
}

Subspace Subspace::orthogonal_complement() const {
  // Append the standard basis and keep what survives Gram-Schmidt against
  // the existing columns.
  Matrix cand(ambient_dim_, basis_.cols() + ambient_dim_);
  for (int j = 0; j < basis_.cols(); ++j)
    for (int i = 0; i < ambient_dim_; ++i) cand.at(i, j) = basis_.at(i, j);
  for (int j = 0; j < ambient_dim_; ++j) cand.at(j, basis_.cols() + j) = 1.0;
  Matrix full = orthonormalize_columns(ambient_dim_, cand, 1e-10);
  Matrix comp(ambient_dim_, full.cols() - basis_.cols());
  for (int j = basis_.cols(); j < full.cols(); ++j)
    for (int i = 0; i < ambient_dim_; ++i)
      comp.at(i, j - basis_.cols()) = full.at(i, j);
  return Subspace(ambient_dim_, std::move(comp));
}

SymmetricMatrix Subspace::projector() const {
  SymmetricMatrix p(ambient_dim_);
  for (int i = 0; i < ambient_dim_; ++i)
    for (int j = i; j < ambient_dim_; ++j) {
      double s = 0.0;
      for (int c = 0; c < basis_.cols(); ++c)
        s += basis_.at(i, c) * basis_.at(j, c);
      p.set(i, j, s);
    }
  return p;
}

double containment_residual(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    fail(ErrorCode::DimensionMismatch, "subspace containment");
  if (u.rank() == 0) return 0.0;
  // ||(I - B_v B_v^t) B_u||_F with orthonormal bases.
  const Matrix& bu = u.basis();
  const Matrix& bv = v.basis();
  Matrix coeff = bv.transposed() * bu;           // r_v x r_u
  Matrix residual = bu - bv * coeff;             // (I - P_v) B_u
  return residual.frobenius_norm();
}

bool subspace_contained(const Subspace& u, const Subspace& v, double tol) {
  return containment_residual(u, v) <= tol;
}

namespace {

double offdiag_norm(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = a[static_cast<size_t>(i) * n + j];
      s += 2.0 * v * v;
    }
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eigh(const SymmetricMatrix& input) {
  if (!input.all_finite()) fail(ErrorCode::InvalidInput, "eigh: non-finite entries");
  const int n = input.dim();
  std::vector<double> a = input.data();
  std::vector<double> q(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) q[static_cast<size_t>(i) * n + i] = 1.0;

  const double scale = 1.0 + input.frobenius_norm();
  const double stop = 1e-12 * scale;
  const double skip = 1e-300;

  if (n > 1) {
    for (int sweep = 0; sweep < 200; ++sweep) {
      if (offdiag_norm(a, n) < stop) break;
      for (int p = 0; p < n - 1; ++p) {
        for (int r = p + 1; r < n; ++r) {
          const double apr = a[static_cast<size_t>(p) * n + r];
          if (std::abs(apr) <= skip) continue;
          const double app = a[static_cast<size_t>(p) * n + p];
          const double arr = a[static_cast<size_t>(r) * n + r];
          const double theta = (arr - app) / (2.0 * apr);
          const double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          const double tau = s / (1.0 + c);
          a[static_cast<size_t>(p) * n + p] = app - t * apr;
          a[static_cast<size_t>(r) * n + r] = arr + t * apr;
          a[static_cast<size_t>(p) * n + r] = 0.0;
          a[static_cast<size_t>(r) * n + p] = 0.0;
          for (int k = 0; k < n; ++k) {
            if (k != p && k != r) {
              const double akp = a[static_cast<size_t>(k) * n + p];
              const double akr = a[static_cast<size_t>(k) * n + r];
              a[static_cast<size_t>(k) * n + p] = akp - s * (akr + tau * akp);
              a[static_cast<size_t>(k) * n + r] = akr + s * (akp - tau * akr);
              a[static_cast<size_t>(p) * n + k] = a[static_cast<size_t>(k) * n + p];
              a[static_cast<size_t>(r) * n + k] = a[static_cast<size_t>(k) * n + r];
            }
            const double qkp = q[static_cast<size_t>(k) * n + p];
            const double qkr = q[static_cast<size_t>(k) * n + r];
            q[static_cast<size_t>(k) * n + p] = qkp - s * (qkr + tau * qkp);
            q[static_cast<size_t>(k) * n + r] = qkr + s * (qkp - tau * qkr);
          }
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a[static_cast<size_t>(i) * n + i] < a[static_cast<size_t>(j) * n + j];
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = a[static_cast<size_t>(order[j]) * n + order[j]];
    for (int i = 0; i < n; ++i)
      out.vectors.at(i, j) = q[static_cast<size_t>(i) * n + order[j]];
  }
  return out;
}

double min_eigenvalue(const SymmetricMatrix& a) {
  return eigh(a).eigenvalues.front();
}

double default_rank_tol(const SymmetricMatrix& a) {
  return 1e-8 * (1.0 + a.frobenius_norm());
}

Subspace kernel_basis(const SymmetricMatrix& a, double tol) {
  if (tol < 0) fail(ErrorCode::InvalidInput, "kernel_basis: negative tol");
  EigenDecomposition ed = eigh(a);
  const int n = a.dim();
  int count = 0;
  for (double ev : ed.eigenvalues)
    if (std::abs(ev) <= tol) ++count;
  Matrix basis(n, count);
  int c = 0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(ed.eigenvalues[j]) > tol) continue;
    for (int i = 0; i < n; ++i) basis.at(i, c) = ed.vectors.at(i, j);
    ++c;
  }
  return Subspace(n, std::move(basis));
}

Subspace kernel_basis(const SymmetricMatrix& a) {
  return kernel_basis(a, default_rank_tol(a));
}

int rank(const SymmetricMatrix& a, double tol) {
  if (tol < 0) fail(ErrorCode::InvalidInput, "rank: negative tol");
  EigenDecomposition ed = eigh(a);
  int r = 0;
  for (double ev : ed.eigenvalues)
    if (std::abs(ev) > tol) ++r;
  return r;
}

namespace {

SymmetricMatrix reassemble(const EigenDecomposition& ed,
                           const std::vector<double>& lambda) {
  const int n = ed.vectors.rows();
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += ed.vectors.at(i, k) * lambda[k] * ed.vectors.at(j, k);
      out.set(i, j, s);
    }
  return out;
}

}  // namespace

SymmetricMatrix psd_project(const SymmetricMatrix& a) {
  EigenDecomposition ed = eigh(a);
  std::vector<double> lambda = ed.eigenvalues;
  for (double& v : lambda) v = std::max(v, 0.0);
  return reassemble(ed, lambda);
}

SymmetricMatrix pseudoinverse(const SymmetricMatrix& a, double tol) {
  if (tol < 0) fail(ErrorCode::InvalidInput, "pseudoinverse: negative tol");
  EigenDecomposition ed = eigh(a);
  std::vector<double> lambda = ed.eigenvalues;
  for (double& v : lambda) v = (std::abs(v) > tol) ? 1.0 / v : 0.0;
  return reassemble(ed, lambda);
}

SymmetricMatrix pseudoinverse(const SymmetricMatrix& a) {
  return pseudoinverse(a, default_rank_tol(a));
}

}  // namespace sdr
