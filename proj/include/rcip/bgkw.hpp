#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rcip/abramowitz.hpp"
#include "rcip/solver.hpp"
#include "rcip/types.hpp"

namespace rcip::bgkw {

/// Per-target upsampling controls. A source panel is accepted either with
/// kernel-split product integration (argument range within the split radius
/// and smooth parts resolved by degree-15 interpolation) or with plain
/// Gauss-Legendre (kernel resolved directly); otherwise it is bisected.
/// Adjacent accepted sub-panels are kept within a factor 2 in size.
struct UpsamplingPolicy {
  double resolve_tol = 1e-13;
  double split_radius = kSplitRadius;
  int max_depth = 60;
  double tail_floor = 1e-18;
  bool level_restrict = true;
};

struct RowDiagnostics {
  int max_depth = 0;
  int subpanels = 0;
};

/// Quadrature row for the integral operator
///   (G u)(x) = 1/(k sqrt(pi)) int J_{-1}(|x-y|/k) u(y) dy
/// over the given panels: returns weights w (16 per panel, panel-major) with
/// sum_q w_q u(y_q) ~ (G u)(x), where y_q are the panels' GL nodes. Densities
/// on sub-panels are interpolated from the parent panel polynomial.
RVector bgkw_system_row(double x, double k,
                        const std::vector<std::pair<double, double>>& panels,
                        const UpsamplingPolicy& policy = {},
                        RowDiagnostics* diag = nullptr);

struct BgkwProblem {
  double k = 1.0;
  int npan = 4;
  int n_sub = 41;
  /// Solve the w-equation (u = w + x) instead of the u-equation; defaults to
  /// k <= 0.3 when unset.
  std::optional<bool> regularized;
  UpsamplingPolicy policy;
};

struct BgkwResult {
  RVector u_coarse;            // velocity at the coarse nodes
  double u_at_half = 0.0;      // u(0.5) from the backward recursion
  double Q = 0.0;              // half-channel mass flow rate int_0^1/2 u dx
  std::optional<double> P_xy;  // stress; not computed (external formula)
  int gmres_iters = 0;
  double cpu_seconds = 0.0;
  bool regularized = false;
};

BgkwResult solve_couette(const BgkwProblem& prob);

/// Right-hand sides of the two BGKW formulations, indexed by endpoint and
/// distance into the arc.
class BgkwRhs final : public models::RhsModel {
 public:
  BgkwRhs(double k, bool w_equation) : k_(k), w_(w_equation) {}
  Complex eval(int gamma, double t) const override;

 private:
  double k_;
  bool w_;
};

/// 1-norm condition estimate of the uncompressed coarse system I + K_coa.
double uncompressed_cond_estimate(double k, int npan = 4);

} // namespace rcip::bgkw
