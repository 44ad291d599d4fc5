#pragma once

#include <cstddef>
#include <vector>

#include "spca/matrix.hpp"

namespace spca {

struct EigDecomp {
  // Descending; ties keep the lower original index first.
  std::vector<double> values;
  // Column k is the unit eigenvector for values[k]. Its entry of largest
  // magnitude is positive (lowest index on ties).
  Matrix vectors;

  std::vector<double> vector(std::size_t k) const;
};

struct JacobiOptions {
  double rel_tol = 1e-12;  // stop once off(A) <= rel_tol * ‖A‖_F
  int max_sweeps = 100;
};

EigDecomp eigh(const SymMatrix& a, const JacobiOptions& opts = {});

// Repeated eigendecompositions of a slowly varying matrix. Each call rotates
// the input into the previous eigenbasis and runs Jacobi from there, which
// usually needs one or two sweeps instead of a cold start. A cold start is
// forced every `restart_every` calls to keep the basis from drifting off
// orthonormality. Results satisfy the same contract as eigh up to rounding;
// they are not bit-identical to eigh.
class EighWorkspace {
 public:
  explicit EighWorkspace(std::size_t restart_every = 64, JacobiOptions opts = {});

  const EigDecomp& decompose(const SymMatrix& a);
  void reset() noexcept { warm_ = false; }

  std::size_t last_sweeps() const noexcept { return last_sweeps_; }

 private:
  std::size_t restart_every_;
  JacobiOptions opts_;
  bool warm_ = false;
  std::size_t calls_since_cold_ = 0;
  std::size_t last_sweeps_ = 0;
  std::vector<double> basis_;  // eigenvectors as rows, d*d
  std::vector<double> work_;
  std::vector<double> tmp_;
  EigDecomp result_;
};

// Largest singular value.
double spectral_norm(const Matrix& a);
// max |eigenvalue|.
double spectral_norm(const SymMatrix& a);

// Euclidean projection onto {w >= 0, Σw = 1}.
std::vector<double> project_simplex(const std::vector<double>& v);

// Frobenius-nearest point of {X ⪰ 0, tr X = 1}.
SymMatrix project_spectrahedron(const SymMatrix& a);
SymMatrix project_spectrahedron(const SymMatrix& a, EighWorkspace& ws);

// Entrywise sign(a)·max(|a| − t, 0).
SymMatrix soft_threshold(const SymMatrix& a, double t);

}  // namespace spca
