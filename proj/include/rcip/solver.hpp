#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rcip/rcip.hpp"

namespace rcip::solver {

/// Compressed local operators of one singular point together with the map
/// from local (ascending-offset) ordering to global coarse node indices.
struct SingularReduction {
  int gamma = 0;
  core::CompressedOperators ops;
  std::vector<int> star_global;   // size nc
};

struct SolveOptions {
  bool use_gmres = false;
  double gmres_tol = 2.3e-16;
  int gmres_max_iter = 200;
};

struct SolveResult {
  CVector v_tilde_coa;    // transformed density on the coarse grid
  CVector rho_hat_coa;    // weight-corrected density R v~ + r_f*
  Complex q;              // functional with h = 1
  int gmres_iters = 0;
};

/// Dense coarse system (I + K_coa^o R) v~ = f^o - K_coa^o r_f*, where R is
/// the identity outside the Gamma* blocks. K_coa is the full coarse Nystrom
/// matrix; the star masks are derived from the reductions.
struct CompressedSystem {
  CMatrix A;        // I + K^o R
  CVector rhs;
  CMatrix K_circ;   // star-masked coarse matrix
  CMatrix R_global;
  CVector r_f_global;
  CVector f_circ;
};

CompressedSystem assemble_compressed(const geom::Mesh& mesh,
                                     const CMatrix& K_coa,
                                     const std::vector<SingularReduction>& reds,
                                     const CVector& f_coa);

SolveResult solve_compressed(const geom::Mesh& mesh, const CompressedSystem& sys,
                             const SolveOptions& opt = {});

/// q = sum h rho_hat |z'| w over the coarse grid.
Complex functional_q(const geom::Mesh& mesh, const CVector& rho_hat,
                     const std::function<Complex(int)>& h_at_node);
Complex functional_q(const geom::Mesh& mesh, const CVector& rho_hat);

/// Reconstructed solution near one singular point. Per level i = n_sub..1 the
/// backward recursion emits true fine-grid values on the outermost type-b
/// panels; the innermost panels (the level-0 c-grid) carry weight-corrected
/// values instead.
struct FineSolution {
  struct LevelValues {
    int level = 0;
    RVector t;          // offsets of the emitted nodes
    RVector weights;    // parameter weights
    RVector speeds;
    CVector v;          // transformed-density part
    CVector g;          // singular part
  };
  std::vector<LevelValues> levels;       // true values, level n_sub first
  RVector t_inner;                       // level-0 c-grid offsets
  RVector w_inner;
  RVector speeds_inner;
  CVector rho_inner;                     // weight-corrected v+g values

  CVector rho(int level_index) const {
    return levels[level_index].v + levels[level_index].g;
  }
};

/// Runs both backward recursions (for v and for g) from the archived forward
/// data of one reduction.
FineSolution backward_reconstruction(const SingularReduction& red,
                                     const CVector& v_tilde_coa);

/// Fine-grid functional: coarse quadrature outside the Gamma* regions plus
/// the reconstructed values (weight-corrected on the innermost panels).
Complex functional_q_fine(const geom::Mesh& mesh, const CVector& v_tilde_coa,
                          const std::vector<SingularReduction>& reds,
                          const std::vector<FineSolution>& fines);

/// Laplace transmission driver: full pipeline on a one-corner contour.
struct LaplaceRun {
  Complex q_coa;
  Complex q_fin;
  core::ForwardResult forward;   // single gamma
  SolveResult solve;
  std::vector<SingularReduction> reductions;
  std::vector<FineSolution> fines;
  geom::Mesh mesh;
};

struct LaplaceOptions {
  int npan = 10;
  int n_sub = 60;
  bool fixed_point_init = false;
  bool want_fine = false;
  bool use_gmres = false;
};

LaplaceRun run_laplace(const geom::Contour& contour,
                       const models::LaplaceDlpKernel& kernel,
                       const models::RhsModel& f, const LaplaceOptions& opt);

} // namespace rcip::solver
