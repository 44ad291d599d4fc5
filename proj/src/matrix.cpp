#include "spca/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spca/errors.hpp"
#include "spca/kernels.hpp"

namespace spca {

namespace {

void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()));
  }
}

}  // namespace

IndexSet normalize_index_set(IndexSet s, std::size_t n) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && s.back() >= n) {
    throw InvalidInput("index " + std::to_string(s.back()) + " out of range for dimension " +
                       std::to_string(n));
  }
  return s;
}

IndexSet complement_set(const IndexSet& s, std::size_t n) {
  IndexSet out;
  out.reserve(n - std::min(n, s.size()));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k < s.size() && s[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

IndexSet full_set(std::size_t n) {
  IndexSet out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) throw InvalidInput("matrix data size does not match shape");
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidInput("matrix entry is not finite");
  }
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix::SymMatrix(std::size_t dim, const std::vector<double>& row_major)
    : dim_(dim), data_(dim * dim) {
  if (row_major.size() != dim * dim) throw InvalidInput("matrix data size does not match dimension");
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double a = row_major[i * dim + j];
      const double b = row_major[j * dim + i];
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidInput("matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") is not finite");
      }
      set(i, j, a == b ? a : 0.5 * (a + b));
    }
  }
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t d = rows.size();
  std::vector<double> flat;
  flat.reserve(d * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw InvalidInput("matrix literal is not square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  *this = SymMatrix(d, flat);
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!std::isfinite(diag[i])) throw InvalidInput("diagonal entry is not finite");
    m.data_[i * diag.size() + i] = diag[i];
  }
  return m;
}

SymMatrix SymMatrix::outer(const std::vector<double>& v, double scale) {
  const std::size_t d = v.size();
  SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) m.set(i, j, scale * v[i] * v[j]);
  }
  return m;
}

std::vector<double> SymMatrix::diag() const {
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = data_[i * dim_ + i];
  return out;
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

SymMatrix SymMatrix::principal(const IndexSet& idx) const {
  SymMatrix out(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a; b < idx.size(); ++b) out.set(a, b, (*this)(idx[a], idx[b]));
  }
  return out;
}

Matrix SymMatrix::block(const IndexSet& rows, const IndexSet& cols) const {
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = (*this)(rows[a], cols[b]);
  }
  return out;
}

Matrix SymMatrix::to_matrix() const { return Matrix(dim_, dim_, data_); }

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  SymMatrix out = a;
  kernels::active().axpy(1.0, b.data().data(), out.mutable_data(), out.size());
  return out;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  SymMatrix out = a;
  kernels::active().axpy(-1.0, b.data().data(), out.mutable_data(), out.size());
  return out;
}

SymMatrix operator*(double s, const SymMatrix& a) {
  SymMatrix out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out.mutable_data()[k] *= s;
  return out;
}

SymMatrix hadamard(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  SymMatrix out(a.dim());
  kernels::active().hadamard(a.data().data(), b.data().data(), out.mutable_data(), out.size());
  return out;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return kernels::active().dot(a.data().data(), b.data().data(), a.size());
}

double frobenius(const SymMatrix& a) {
  return std::sqrt(kernels::active().dot(a.data().data(), a.data().data(), a.size()));
}

double frobenius_diff(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return std::sqrt(kernels::active().sum_sq_diff(a.data().data(), b.data().data(), a.size()));
}

double max_abs(const SymMatrix& a) { return kernels::active().max_abs(a.data().data(), a.size()); }

double max_abs(const Matrix& a) { return kernels::active().max_abs(a.data().data(), a.data().size()); }

double l11(const SymMatrix& a) { return kernels::active().sum_abs(a.data().data(), a.size()); }

std::vector<double> matvec(const SymMatrix& a, const std::vector<double>& x) {
  if (x.size() != a.dim()) throw InvalidInput("matvec dimension mismatch");
  const auto& k = kernels::active();
  std::vector<double> y(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) y[i] = k.dot(a.row(i), x.data(), a.dim());
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matmul dimension mismatch");
  const auto& k = kernels::active();
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double v = a(i, l);
      if (v != 0.0) k.axpy(v, b.row(l), out.row(i), b.cols());
    }
  }
  return out;
}

Matrix matmul(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b);
  return matmul(a.to_matrix(), b.to_matrix());
}

SymMatrix embed(const SymMatrix& small, const IndexSet& idx, std::size_t d) {
  if (small.dim() != idx.size()) throw InvalidInput("embed: block size does not match index set");
  SymMatrix out(d);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] >= d) throw InvalidInput("embed: index out of range");
    for (std::size_t b = a; b < idx.size(); ++b) out.set(idx[a], idx[b], small(a, b));
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidInput("dot: length mismatch");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace spca
