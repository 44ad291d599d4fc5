#include "spca/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spca/errors.hpp"
#include "spca/kernels.hpp"

namespace spca {

namespace {

void require_finite(const SymMatrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw InvalidInput("eigh: matrix has non-finite entries");
  }
}

double off_norm_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
  }
  return 2.0 * s;
}

// Cyclic Jacobi on the row-major symmetric matrix `a`, applying every rotation
// to the rows of `e` as well, so rows of `e` end up as eigenvectors when they
// start as the identity. `a` is kept exactly symmetric. Returns sweeps used.
std::size_t jacobi(double* a, double* e, std::size_t n, double abs_tol, int max_sweeps) {
  const auto& k = kernels::active();
  const double tol_sq = abs_tol * abs_tol;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm_sq(a, n) <= tol_sq) return static_cast<std::size_t>(sweep);
    double sm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sm += std::fabs(a[i * n + j]);
    }
    // Rotations with |apq| <= abs_tol/n can never be what keeps off(A) above
    // abs_tol, so they are skipped in every sweep.
    const double floor_skip = abs_tol / static_cast<double>(n);
    const double skip_below = std::max(floor_skip, sweep < 3 ? 0.2 * sm / nn : 0.0);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double g = 100.0 * std::fabs(apq);
        if (sweep > 3 && std::fabs(app) + g == std::fabs(app) &&
            std::fabs(aqq) + g == std::fabs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        if (apq == 0.0 || std::fabs(apq) <= skip_below) continue;

        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        k.rotate(a + p * n, a + q * n, n, c, s);
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          a[r * n + p] = a[p * n + r];
          a[r * n + q] = a[q * n + r];
        }
        k.rotate(e + p * n, e + q * n, n, c, s);
      }
    }
  }
  return static_cast<std::size_t>(max_sweeps);
}

// Sorts eigenpairs, fixes signs and fills `out`. `e` holds eigenvectors as rows.
void finalize(const double* a, double* e, std::size_t n, EigDecomp& out) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a[src * n + src];
    double* row = e + src * n;
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(row[i]) > best) {
        best = std::fabs(row[i]);
        arg = i;
      }
    }
    if (row[arg] < 0.0) {
      for (std::size_t i = 0; i < n; ++i) row[i] = -row[i];
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, col) = row[i];
  }
}

void set_identity(std::vector<double>& e, std::size_t n) {
  e.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
}

}  // namespace

std::vector<double> EigDecomp::vector(std::size_t k) const {
  std::vector<double> v(vectors.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
  return v;
}

EigDecomp eigh(const SymMatrix& a, const JacobiOptions& opts) {
  require_finite(a);
  const std::size_t n = a.dim();
  std::vector<double> work = a.data();
  std::vector<double> e;
  set_identity(e, n);
  jacobi(work.data(), e.data(), n, opts.rel_tol * frobenius(a), opts.max_sweeps);
  EigDecomp out;
  finalize(work.data(), e.data(), n, out);
  return out;
}

EighWorkspace::EighWorkspace(std::size_t restart_every, JacobiOptions opts)
    : restart_every_(restart_every == 0 ? 1 : restart_every), opts_(opts) {}

const EigDecomp& EighWorkspace::decompose(const SymMatrix& a) {
  require_finite(a);
  const std::size_t n = a.dim();
  if (basis_.size() != n * n || calls_since_cold_ >= restart_every_) warm_ = false;

  if (warm_) {
    // work = E A Eᵀ, where rows of E are the previous eigenvectors.
    const auto& k = kernels::active();
    tmp_.resize(n * n);
    work_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) tmp_[i * n + j] = k.dot(basis_.data() + i * n, a.row(j), n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double v = k.dot(tmp_.data() + i * n, basis_.data() + j * n, n);
        work_[i * n + j] = v;
        work_[j * n + i] = v;
      }
    }
    ++calls_since_cold_;
  } else {
    work_ = a.data();
    set_identity(basis_, n);
    calls_since_cold_ = 0;
    warm_ = true;
  }
  last_sweeps_ = jacobi(work_.data(), basis_.data(), n, opts_.rel_tol * frobenius(a),
                        opts_.max_sweeps);
  finalize(work_.data(), basis_.data(), n, result_);
  return result_;
}

double spectral_norm(const Matrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw InvalidInput("spectral_norm: non-finite entry");
  }
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  // Gram matrix on the smaller side.
  const bool use_rows = a.rows() <= a.cols();
  const Matrix& m = a;
  const std::size_t g = use_rows ? a.rows() : a.cols();
  const std::size_t inner_dim = use_rows ? a.cols() : a.rows();
  SymMatrix gram(g);
  const Matrix t = use_rows ? Matrix() : a.transpose();
  const Matrix& src = use_rows ? m : t;
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i; j < g; ++j) gram.set(i, j, k.dot(src.row(i), src.row(j), inner_dim));
  }
  const EigDecomp ed = eigh(gram);
  return std::sqrt(std::max(0.0, ed.values.front()));
}

double spectral_norm(const SymMatrix& a) {
  if (a.dim() == 0) return 0.0;
  const EigDecomp ed = eigh(a);
  return std::max(std::fabs(ed.values.front()), std::fabs(ed.values.back()));
}

std::vector<double> project_simplex(const std::vector<double>& v) {
  if (v.empty()) throw InvalidInput("project_simplex: empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInput("project_simplex: non-finite entry");
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    cumsum += v[order[r]];
    const double cand = (cumsum - 1.0) / static_cast<double>(r + 1);
    if (v[order[r]] - cand > 0.0) theta = cand;
  }
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(v[i] - theta, 0.0);
  return w;
}

namespace {

SymMatrix reconstruct(const EigDecomp& ed, const std::vector<double>& w) {
  const std::size_t n = ed.values.size();
  SymMatrix x(n);
  double* out = x.mutable_data();
  std::vector<double> v(n);
  const auto& k = kernels::active();
  for (std::size_t col = 0; col < n; ++col) {
    if (w[col] <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) v[i] = ed.vectors(i, col);
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w[col] * v[i];
      k.axpy(wi, v.data() + i, out + i * n + i, n - i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out[j * n + i] = out[i * n + j];
  }
  return x;
}

}  // namespace

SymMatrix project_spectrahedron(const SymMatrix& a) {
  const EigDecomp ed = eigh(a);
  return reconstruct(ed, project_simplex(ed.values));
}

SymMatrix project_spectrahedron(const SymMatrix& a, EighWorkspace& ws) {
  const EigDecomp& ed = ws.decompose(a);
  return reconstruct(ed, project_simplex(ed.values));
}

SymMatrix soft_threshold(const SymMatrix& a, double t) {
  if (!(t >= 0.0)) throw InvalidInput("soft_threshold: threshold must be nonnegative");
  SymMatrix out = a;
  kernels::active().soft_threshold(a.data().data(), out.mutable_data(), a.size(), t);
  return out;
}

}  // namespace spca
