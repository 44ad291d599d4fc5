#pragma once

// Dense real matrices. SymMatrix is exactly symmetric and finite by
// construction; Matrix is a plain row-major rectangular block used for
// off-diagonal pieces and spectral norms.

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace spca {

// Sorted, duplicate-free, 0-based node indices.
using IndexSet = std::vector<std::size_t>;

// Sorts and deduplicates; throws InvalidInput if any index is >= n.
IndexSet normalize_index_set(IndexSet s, std::size_t n);

// [n] minus s. `s` must be normalized.
IndexSet complement_set(const IndexSet& s, std::size_t n);

IndexSet full_set(std::size_t n);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  const double* row(std::size_t i) const noexcept { return data_.data() + i * cols_; }
  double* row(std::size_t i) noexcept { return data_.data() + i * cols_; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transpose() const;

  bool operator==(const Matrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim);

  // Row-major d*d entries. The stored matrix is (A + Aᵀ)/2; any non-finite
  // entry throws InvalidInput.
  SymMatrix(std::size_t dim, const std::vector<double>& row_major);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(const std::vector<double>& diag);
  // v vᵀ scaled by `scale`.
  static SymMatrix outer(const std::vector<double>& v, double scale = 1.0);

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
  // Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  const double* row(std::size_t i) const noexcept { return data_.data() + i * dim_; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  // Direct storage access for kernels that preserve symmetry themselves
  // (entrywise maps, symmetric updates). Callers own the invariant.
  double* mutable_data() noexcept { return data_.data(); }

  std::vector<double> diag() const;
  double trace() const noexcept;

  // Principal submatrix on `idx` (order preserved).
  SymMatrix principal(const IndexSet& idx) const;
  // Rectangular block rows x cols.
  Matrix block(const IndexSet& rows, const IndexSet& cols) const;
  Matrix to_matrix() const;

  bool operator==(const SymMatrix& o) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Elementwise algebra. Dimensions must agree (checked, InvalidInput).
SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);
SymMatrix hadamard(const SymMatrix& a, const SymMatrix& b);

// ⟨A, B⟩ = Σ a_ij b_ij
double inner(const SymMatrix& a, const SymMatrix& b);
double frobenius(const SymMatrix& a);
double frobenius_diff(const SymMatrix& a, const SymMatrix& b);
double max_abs(const SymMatrix& a);
double max_abs(const Matrix& a);
// ‖A‖₁,₁ = Σ |a_ij|
double l11(const SymMatrix& a);

std::vector<double> matvec(const SymMatrix& a, const std::vector<double>& x);
// A·B as a general matrix.
Matrix matmul(const SymMatrix& a, const SymMatrix& b);
Matrix matmul(const Matrix& a, const Matrix& b);

// Embeds a |idx|×|idx| matrix into a zero d×d matrix at rows/cols idx.
SymMatrix embed(const SymMatrix& small, const IndexSet& idx, std::size_t d);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace spca
