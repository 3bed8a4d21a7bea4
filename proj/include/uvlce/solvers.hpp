#pragma once

#include <optional>
#include <vector>

#include "uvlce/sensing.hpp"

namespace uvlce {

struct SolverResult {
  std::vector<double> x_hat;
  int iterations_used = 0;
  double residual_norm = 0.0;
};

// entrywise sgn(r_i) * max(|r_i| - zeta*sigma, 0)
std::vector<double> soft_threshold(const std::vector<double>& r, double zeta, double sigma);

// default ridge for the LS baseline: 1e-6 * trace(Phi^T Phi) / N
double default_ridge(const ObservationMatrix& phi);

// argmin ||y - Phi x||^2 + ridge ||x||^2 via the regularized normal equations
// (P x P dual form when P < N, N x N otherwise)
SolverResult ls_estimate(const std::vector<double>& y, const ObservationMatrix& phi, double ridge);

struct OmpConfig {
  int max_atoms = 1;
  // stop once ||residual|| <= residual_tol; also sets the conditioning floor:
  // candidate atoms whose component orthogonal to the selected span has norm
  // <= residual_tol/sqrt(P) are skipped (they only amplify noise). 0 disables
  // both, giving plain OMP.
  double residual_tol = 0.0;
};

SolverResult omp_estimate(const std::vector<double>& y, const ObservationMatrix& phi,
                          const OmpConfig& cfg);

// state after iteration t (1-based); onsager_coeff is the b_t used to build
// residual_t, i.e. the support fraction of the previous iterate
struct IterationState {
  std::vector<double> residual;      // v_t, length P
  double sigma = 0.0;                // ||v_t|| / sqrt(P)
  std::vector<double> linear;        // r_t, length N
  std::vector<double> estimate;      // x_t, length N
  double onsager_coeff = 0.0;        // b_t
};

using IterationTrace = std::vector<IterationState>;

struct AmpConfig {
  int iterations = 10;
  double zeta = 1.0;
  bool onsager = true;                        // ablation toggle: false gives plain ISTA-style steps
  std::optional<double> fixed_threshold;      // overrides zeta*sigma_t when set
};

// entries with |x_i| above this count toward the support fraction b_t
inline constexpr double kSupportEps = 1e-12;

// Untrained AMP recursion (fixed B = Phi^T, fixed zeta). Throws NonFinite on
// divergence instead of clamping.
SolverResult run_amp(const std::vector<double>& y, const ObservationMatrix& phi,
                     const AmpConfig& cfg, IterationTrace* trace = nullptr);

}  // namespace uvlce
