#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rcip/geometry.hpp"
#include "rcip/models.hpp"
#include "rcip/quadrature.hpp"
#include "rcip/types.hpp"

namespace rcip::core {

/// Assembles the local Nystrom system I + K_ib on a type-b grid; the caller
/// supplies the discretization (pointwise kernels use system_matrix_type_b,
/// the BGKW driver builds rows with kernel-split quadrature).
using LocalAssembler = std::function<CMatrix(const geom::LocalGrid&)>;

/// M = I + K_ib with entries K(z_p, z_q) |z'_q| w_q and the kernel's
/// coincident limit on the diagonal.
CMatrix system_matrix_type_b(const models::KernelModel& kernel,
                             const geom::LocalGrid& g);

/// Everything one backward-recursion step consumes, archived per level.
struct RcipLevelData {
  int level = 0;
  CMatrix M_circ;      // I_b^o + K_ib^o (star block zeroed)
  CMatrix R_prev;      // R_{i-1}
  CVector rf_prev;     // r_{f(i-1)}*
  CVector f_b;         // f on the level's b-grid
  geom::LocalGrid grid;
};

/// Output of the forward recursions for one singular point.
struct CompressedOperators {
  CMatrix R_block;     // nontrivial nc x nc block of R
  CVector r_f_star;    // nc-vector, R_f f*_coa in local (ascending-offset) order
  int n_sub = 0;
  bool one_sided = false;
  std::vector<RcipLevelData> archive;   // present when requested
};

/// One inversion-free compression step
///   R_i = P_Wbc^T (F{R_{i-1}^{-1}} + I_b^o + K_ib^o)^{-1} P_bc
/// via the partitioned-inverse formula; only a (nb-nc) x (nb-nc) Schur
/// complement is inverted. M_circ must carry a zero star block.
CMatrix schur_banachiewicz_step(const quad::ProlongationSet& pro,
                                const CMatrix& M_circ, const CMatrix& R_prev,
                                const geom::IndexSets& idx);

/// One step of the vector recursion
///   r_fi* = P_Wbc^T S_i (F{R_{i-1}^{-1} r*} + f_ib^o),
/// implemented without inverting R_{i-1}.
CVector rf_vector_step(const quad::ProlongationSet& pro, const CMatrix& M_circ,
                       const CMatrix& R_prev, const CVector& rf_prev,
                       const CVector& f_b, const geom::IndexSets& idx);

/// Matrix analogue producing R_fi from R_{f(i-1)} and the level's P_fibc.
CMatrix rf_matrix_step(const quad::ProlongationSet& pro, const CMatrix& M_circ,
                       const CMatrix& R_prev, const CMatrix& Rf_prev,
                       const CMatrix& P_fibc, const geom::IndexSets& idx);

struct ForwardOptions {
  int n_sub = 60;
  int npan = 10;
  bool keep_archive = false;
  /// Optional initializers (fixed-point start); plain start inverts the
  /// center block of M_1 when absent.
  std::optional<CMatrix> R0;
  std::optional<CMatrix> Rf0;     // used to form r_f0* = Rf0 f_1b*
  bool track_Rf_matrix = false;   // also run the matrix recursion (oracles)
};

struct ForwardResult {
  CompressedOperators ops;
  CMatrix Rf_block;   // valid when track_Rf_matrix
};

/// Runs the forward recursions for R and r_f* (and optionally R_f) for one
/// singular point, levels 1..n_sub.
ForwardResult forward_recursion(const geom::Contour& contour, int gamma,
                                const LocalAssembler& assemble,
                                const models::RhsModel& f,
                                const ForwardOptions& opt);

/// Fixed point R* of the compression step on the scale-invariant wedge.
/// The wedge data are the level grids at a scale deep enough that the
/// contour is straight to machine precision. Plain Picard iteration,
/// relative Frobenius tolerance 1e-15, at most 2000 iterations.
struct FixedPointR {
  CMatrix R_star;
  CMatrix M_circ;        // converged wedge I^o + K^o
  geom::LocalGrid grid;  // the wedge grid (for building P_fbc)
  int iterations = 0;
};

FixedPointR fixed_point_R(const geom::Contour& contour, int gamma,
                          const LocalAssembler& assemble, int npan);

/// Fixed point R_f* from the linear equation X = A1 X A2 + D (the wedge limit
/// of the R_f recursion with the level-independent P_fbc built from the
/// leading homogeneous term of f), solved by Kronecker vectorization.
CMatrix fixed_point_Rf(const FixedPointR& fp, const models::RhsModel& f,
                       const geom::IndexSets& idx);

/// Applies S = (F{R^{-1}} + M_circ)^{-1} to a vector without forming R^{-1}.
CVector apply_compressed_inverse(const CMatrix& M_circ, const CMatrix& R_prev,
                                 const CVector& x, const geom::IndexSets& idx);

} // namespace rcip::core
