#pragma once

// Support recovery on top of the SDP: ρ tuning, the theoretical ρ, the
// rescaled parameter and the sufficient-condition report.

#include <array>
#include <string>
#include <vector>

#include "spca/graph.hpp"
#include "spca/matrix.hpp"
#include "spca/sdp.hpp"

namespace spca {

struct Recovery {
  IndexSet support;
  SdpSolution solution;
};

// solve_sdp + support_of. An all-zero M short-circuits to an empty support.
Recovery recover_support(const SymMatrix& m, double rho, const SdpOptions& opts = {});

// C_ρ = (1−a)·⟨M, X̂_ρ⟩/⟨M, X̂_0⟩ + a·(1 − |Ĵ_ρ|/d).
double criterion_value(double explained, double baseline, std::size_t support_size, std::size_t d, double a);

// Solves at 0 and at ρ. DegenerateBaseline when ⟨M, X̂_0⟩ == 0.
double criterion(const SymMatrix& m, double rho, double a, const SdpOptions& opts = {});

// Criteria within this distance of the best count as ties; ties go to the
// larger ρ.
inline constexpr double kCriterionTieTol = 1e-6;

struct TuningTrace {
  std::vector<double> grid;
  std::vector<double> criteria;
  std::vector<IndexSet> supports;
  std::vector<bool> converged;
  double baseline = 0.0;  // ⟨M, X̂_0⟩
  double chosen_rho = 0.0;
  std::size_t chosen_index = 0;
  IndexSet chosen_support;
  double a = 0.5;
};

// The grid is solved in ascending ρ order with warm starts; the trace keeps
// the caller's order.
TuningTrace tune_rho(const SymMatrix& m, const std::vector<double>& grid, double a,
                     const SdpOptions& opts = {});

// 0.025, 0.05, …, 1.0
std::vector<double> default_rho_grid();
std::vector<double> make_grid(double start, double stop, double step);

// 2σ√(max{Δ_{J,Jc}, Δ_{Jc,Jc}}·ln d) + ‖M*_{Jc,J}‖max
double theoretical_rho_formula(double sigma, double dmax_cross, double dmax_offsupport, double d,
                               double offblock_max);
double theoretical_rho(const SymMatrix& m_star, const ObservationGraph& g, double sigma, const IndexSet& support);

// Graph and matrix quantities shared by the rescaled parameter and the
// condition report.
struct SupportGeometry {
  std::size_t d = 0;
  std::size_t s = 0;
  double phi_jj = 0.0;
  double psi_jj = 0.0;
  double dmax_jj = 0.0;
  double dmax_cross = 0.0;       // Δmax(G_{J,Jc}), both sides
  double dmax_offsupport = 0.0;  // Δmax(G_{Jc,Jc})
  double norm_jj = 0.0;          // ‖M*_JJ‖₂
  double norm_cross = 0.0;       // ‖M*_{Jc,J}‖₂
  double norm_offsupport = 0.0;  // ‖M*_{Jc,Jc}‖₂
  double max_cross = 0.0;        // ‖M*_{Jc,J}‖max
  double masked_norm_cross = 0.0;       // ‖A∘M*_{Jc,J}‖₂
  double masked_norm_offsupport = 0.0;  // ‖A∘M*_{Jc,Jc}‖₂
  double spectral_gap = 0.0;     // λ1(M*) − λ2(M*)
  double min_abs_u1 = 0.0;       // min over J of |u1|
};

// Validates that the leading eigenvector of m_star is supported exactly on
// `support`. For |J| = 1, G_JJ is a single node: φ = 1 with a loop, else 0,
// and ψ = 0.
SupportGeometry support_geometry(const SymMatrix& m_star, const ObservationGraph& g, const IndexSet& support);

struct RescaledTerms {
  double irregularity_term = 0.0;  // ‖M*_JJ‖₂·ψ(G_JJ)
  double noise_jj = 0.0;           // σ√(Δmax(G_JJ)·ln s)
  double cross_term = 0.0;         // s·‖M*_{Jc,J}‖₂
  double offsupport_term = 0.0;    // ‖M*_{Jc,Jc}‖₂/√s
  double noise_cross = 0.0;        // σ·s·√(max{Δ_{J,Jc}, Δ_{Jc,Jc}}·ln d)
  double numerator = 0.0;
  double denominator = 0.0;        // φ(G_JJ)·λ̄(M*)·min|u1_J|/s
  double rescaled = 0.0;
};

// Disconnected when φ(G_JJ) = 0; IrregularityUndefined propagates.
RescaledTerms rescaled_terms(const SymMatrix& m_star, const ObservationGraph& g, double sigma,
                             const IndexSet& support);
double rescaled_parameter(const SymMatrix& m_star, const ObservationGraph& g, double sigma,
                          const IndexSet& support);

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool strict = false;
  bool holds = false;
};

struct ConditionReport {
  std::array<Inequality, 5> ineq;
  double xi = 0.0;
  double rescaled = 0.0;
  double spectral_gap = 0.0;
  double min_abs_u1 = 0.0;
  bool all_hold() const;
};

ConditionReport sufficient_conditions_report(const SymMatrix& m_star, const ObservationGraph& g, double sigma,
                                             double rho, const IndexSet& support);

}  // namespace spca
