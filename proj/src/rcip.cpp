#include "rcip/rcip.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rcip/gauss.hpp"
#include "rcip/linalg.hpp"

namespace rcip::core {

namespace {

CMatrix sub(const CMatrix& M, const std::vector<int>& rows,
            const std::vector<int>& cols) {
  CMatrix S(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) S(i, j) = M(rows[i], cols[j]);
  return S;
}

CVector subv(const CVector& v, const std::vector<int>& idx) {
  CVector s(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) s[i] = v[idx[i]];
  return s;
}

void scatter(CMatrix& M, const std::vector<int>& rows,
             const std::vector<int>& cols, const CMatrix& S) {
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) M(rows[i], cols[j]) = S(i, j);
}

// P_bc and P_Wbc blocks acting between starL rows and starS columns; the
// circ parts are identities by construction.
struct ProBlocks {
  CMatrix P_mid;    // (starL x starS)
  CMatrix PW_mid;
};

ProBlocks pro_blocks(const quad::ProlongationSet& pro,
                     const geom::IndexSets& idx) {
  ProBlocks b;
  b.P_mid.resize(idx.starL.size(), idx.starS.size());
  b.PW_mid.resize(idx.starL.size(), idx.starS.size());
  for (size_t i = 0; i < idx.starL.size(); ++i)
    for (size_t j = 0; j < idx.starS.size(); ++j) {
      b.P_mid(i, j) = pro.P_bc(idx.starL[i], idx.starS[j]);
      b.PW_mid(i, j) = pro.P_Wbc(idx.starL[i], idx.starS[j]);
    }
  return b;
}

CMatrix zero_star_block(const CMatrix& M, const geom::IndexSets& idx) {
  // M_circ = I_b^o + K_ib^o: the whole star block (identity included) is zeroed
  CMatrix Mo = M;
  for (int p : idx.starL)
    for (int q : idx.starL) Mo(p, q) = Complex(0, 0);
  return Mo;
}

} // namespace

CMatrix system_matrix_type_b(const models::KernelModel& kernel,
                             const geom::LocalGrid& g) {
  const int n = g.size();
  CMatrix M = CMatrix::Identity(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const Complex k =
          (p == q) ? kernel.diagonal_limit(g.zpnodes[p], g.zppnodes[p])
                   : kernel.eval(g.znodes[p], g.normals[p], g.znodes[q],
                                 g.normals[q]);
      M(p, q) += k * g.speeds[q] * g.weights[q];
    }
  }
  return M;
}

CMatrix schur_banachiewicz_step(const quad::ProlongationSet& pro,
                                const CMatrix& M_circ, const CMatrix& R_prev,
                                const geom::IndexSets& idx) {
  const auto blocks = pro_blocks(pro, idx);
  const CMatrix U = sub(M_circ, idx.starL, idx.circL);
  const CMatrix V = sub(M_circ, idx.circL, idx.starL);
  const CMatrix D = sub(M_circ, idx.circL, idx.circL);

  const CMatrix VA = V * R_prev;
  const CMatrix PTA = blocks.PW_mid.transpose() * R_prev;
  const CMatrix PTAU = PTA * U;
  CMatrix E;
  try {
    E = linalg::lu_solve(D - VA * U,
                         CMatrix::Identity(idx.circL.size(), idx.circL.size()));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string("schur_banachiewicz_step: ") + e.what());
  }
  const CMatrix EVAP = E * (VA * blocks.P_mid);

  CMatrix R(idx.nc, idx.nc);
  scatter(R, idx.starS, idx.starS, PTA * blocks.P_mid + PTAU * EVAP);
  scatter(R, idx.circS, idx.circS, E);
  scatter(R, idx.circS, idx.starS, -EVAP);
  scatter(R, idx.starS, idx.circS, -PTAU * E);
  return R;
}

CVector rf_vector_step(const quad::ProlongationSet& pro, const CMatrix& M_circ,
                       const CMatrix& R_prev, const CVector& rf_prev,
                       const CVector& f_b, const geom::IndexSets& idx) {
  const auto blocks = pro_blocks(pro, idx);
  const CMatrix U = sub(M_circ, idx.starL, idx.circL);
  const CMatrix V = sub(M_circ, idx.circL, idx.starL);
  const CMatrix D = sub(M_circ, idx.circL, idx.circL);
  const CVector fc = subv(f_b, idx.circL);

  // u = S (F{R^{-1} r*} + f^o):  e = E (f_c - V r*), u* = r* - R U e, u^o = e
  const CMatrix Schur = D - (V * R_prev) * U;
  const CVector e = linalg::lu_solve(Schur, CMatrix(fc - V * rf_prev));
  const CVector ustar = rf_prev - R_prev * (U * e);

  CVector r(idx.nc);
  const CVector rs = blocks.PW_mid.transpose() * ustar;
  for (size_t i = 0; i < idx.starS.size(); ++i) r[idx.starS[i]] = rs[i];
  for (size_t i = 0; i < idx.circS.size(); ++i) r[idx.circS[i]] = e[i];
  return r;
}

CMatrix rf_matrix_step(const quad::ProlongationSet& pro, const CMatrix& M_circ,
                       const CMatrix& R_prev, const CMatrix& Rf_prev,
                       const CMatrix& P_fibc, const geom::IndexSets& idx) {
  const auto blocks = pro_blocks(pro, idx);
  const CMatrix U = sub(M_circ, idx.starL, idx.circL);
  const CMatrix V = sub(M_circ, idx.circL, idx.starL);
  const CMatrix D = sub(M_circ, idx.circL, idx.circL);

  // columns of (F{R^{-1} R_f} + I^o) P_fibc, then S applied without R^{-1}
  CMatrix Pf_star(idx.starL.size(), idx.nc), Pf_circ(idx.circL.size(), idx.nc);
  for (size_t i = 0; i < idx.starL.size(); ++i) Pf_star.row(i) = P_fibc.row(idx.starL[i]);
  for (size_t i = 0; i < idx.circL.size(); ++i) Pf_circ.row(i) = P_fibc.row(idx.circL[i]);
  const CMatrix X = Rf_prev * Pf_star;
  const CMatrix Schur = D - (V * R_prev) * U;
  const CMatrix Emat = linalg::lu_solve(Schur, CMatrix(Pf_circ - V * X));
  const CMatrix Ustar = X - R_prev * (U * Emat);

  CMatrix Rf(idx.nc, idx.nc);
  const CMatrix Rs = blocks.PW_mid.transpose() * Ustar;
  for (size_t i = 0; i < idx.starS.size(); ++i) Rf.row(idx.starS[i]) = Rs.row(i);
  for (size_t i = 0; i < idx.circS.size(); ++i) Rf.row(idx.circS[i]) = Emat.row(i);
  return Rf;
}

CVector apply_compressed_inverse(const CMatrix& M_circ, const CMatrix& R_prev,
                                 const CVector& x, const geom::IndexSets& idx) {
  const CMatrix U = sub(M_circ, idx.starL, idx.circL);
  const CMatrix V = sub(M_circ, idx.circL, idx.starL);
  const CMatrix D = sub(M_circ, idx.circL, idx.circL);
  const CVector xs = subv(x, idx.starL);
  const CVector xc = subv(x, idx.circL);
  const CMatrix Schur = D - (V * R_prev) * U;
  const CVector Axs = R_prev * xs;
  const CVector e = linalg::lu_solve(Schur, CMatrix(xc - V * Axs));
  const CVector us = Axs - R_prev * (U * e);
  CVector out(idx.nb);
  for (size_t i = 0; i < idx.starL.size(); ++i) out[idx.starL[i]] = us[i];
  for (size_t i = 0; i < idx.circL.size(); ++i) out[idx.circL[i]] = e[i];
  return out;
}

ForwardResult forward_recursion(const geom::Contour& contour, int gamma,
                                const LocalAssembler& assemble,
                                const models::RhsModel& f,
                                const ForwardOptions& opt) {
  const bool one_sided = contour.singular_points()[gamma].one_sided;
  const auto idx = geom::index_sets(one_sided);
  const auto& pro = quad::prolongation(one_sided);

  ForwardResult res;
  res.ops.n_sub = opt.n_sub;
  res.ops.one_sided = one_sided;

  CMatrix R;
  CVector rf;
  CMatrix Rf;
  bool have_init = false;

  for (int level = 1; level <= opt.n_sub; ++level) {
    const geom::LocalGrid g =
        geom::local_type_b_grid(contour, gamma, level, opt.n_sub, opt.npan);
    const CMatrix M = assemble(g);
    const CMatrix M_circ = zero_star_block(M, idx);
    const CVector f_b = f.eval_on(g);

    if (!have_init) {
      if (opt.R0) {
        R = *opt.R0;
        const CVector f_star = subv(f_b, idx.starL);
        if (opt.Rf0)
          rf = (*opt.Rf0) * f_star;
        else
          rf = R * f_star;
        if (opt.track_Rf_matrix) Rf = opt.Rf0 ? *opt.Rf0 : R;
      } else {
        R = linalg::inverse(sub(M, idx.starL, idx.starL));
        rf = R * subv(f_b, idx.starL);
        if (opt.track_Rf_matrix) Rf = R;
      }
      have_init = true;
    }

    if (opt.keep_archive) {
      RcipLevelData d;
      d.level = level;
      d.M_circ = M_circ;
      d.R_prev = R;
      d.rf_prev = rf;
      d.f_b = f_b;
      d.grid = g;
      res.ops.archive.push_back(std::move(d));
    }

    if (opt.track_Rf_matrix) {
      const CVector f_c = f.eval_on_cgrid(g);
      const CMatrix P_fibc = quad::build_P_f_bc(f_b, f_c, one_sided);
      Rf = rf_matrix_step(pro, M_circ, R, Rf, P_fibc, idx);
    }
    rf = rf_vector_step(pro, M_circ, R, rf, f_b, idx);
    try {
      R = schur_banachiewicz_step(pro, M_circ, R, idx);
    } catch (const std::runtime_error& e) {
      std::ostringstream msg;
      msg << e.what() << " (level " << level << ")";
      throw std::runtime_error(msg.str());
    }
  }
  res.ops.R_block = R;
  res.ops.r_f_star = rf;
  if (opt.track_Rf_matrix) res.Rf_block = Rf;
  return res;
}

namespace {
// Scale at which the contour is a straight wedge to double precision; the
// kernel entries are then level independent (scale invariance).
constexpr int kWedgeDepth = 120;
} // namespace

FixedPointR fixed_point_R(const geom::Contour& contour, int gamma,
                          const LocalAssembler& assemble, int npan) {
  const bool one_sided = contour.singular_points()[gamma].one_sided;
  const auto idx = geom::index_sets(one_sided);
  const auto& pro = quad::prolongation(one_sided);

  FixedPointR fp;
  fp.grid = geom::local_type_b_grid(contour, gamma, 1, kWedgeDepth, npan);
  const CMatrix M = assemble(fp.grid);
  fp.M_circ = zero_star_block(M, idx);

  CMatrix R = linalg::inverse(sub(M, idx.starL, idx.starL));
  for (int it = 1; it <= 2000; ++it) {
    const CMatrix Rn = schur_banachiewicz_step(pro, fp.M_circ, R, idx);
    const double diff = (Rn - R).norm() / Rn.norm();
    R = Rn;
    if (diff <= 1e-15) {
      fp.R_star = R;
      fp.iterations = it;
      return fp;
    }
  }
  throw std::runtime_error("fixed_point_R: no convergence within 2000 iterations");
}

CMatrix fixed_point_Rf(const FixedPointR& fp, const models::RhsModel& f,
                       const geom::IndexSets& idx) {
  if (!f.has_homogeneous_leading_term())
    throw std::invalid_argument("fixed_point_Rf: f has no homogeneous leading term");
  const bool one_sided = fp.grid.one_sided;
  const auto& pro = quad::prolongation(one_sided);
  const auto blocks = pro_blocks(pro, idx);

  CVector f_b(fp.grid.size()), f_c(fp.grid.csize());
  for (int i = 0; i < fp.grid.size(); ++i)
    f_b[i] = f.leading_term(fp.grid.gamma, fp.grid.t[i]);
  for (int i = 0; i < fp.grid.csize(); ++i)
    f_c[i] = f.leading_term(fp.grid.gamma, fp.grid.tc[i]);
  const CMatrix P_fbc = quad::build_P_f_bc(f_b, f_c, one_sided);

  const CMatrix& A = fp.R_star;
  const CMatrix U = sub(fp.M_circ, idx.starL, idx.circL);
  const CMatrix V = sub(fp.M_circ, idx.circL, idx.starL);
  const CMatrix D = sub(fp.M_circ, idx.circL, idx.circL);
  const CMatrix AU = A * U;
  const CMatrix VA = V * A;
  const CMatrix E = linalg::lu_solve(
      D - VA * U, CMatrix::Identity(idx.circL.size(), idx.circL.size()));

  // S = (F{R*^{-1}} + M_circ)^{-1} via the partitioned inverse; the two
  // ingredients of the linear map X -> A1 X A2 + D0 follow without ever
  // inverting R*.
  const int nb = idx.nb, nc = idx.nc;
  CMatrix S(nb, nb);
  scatter(S, idx.starL, idx.starL, A + AU * E * VA);
  scatter(S, idx.starL, idx.circL, -AU * E);
  scatter(S, idx.circL, idx.starL, -E * VA);
  scatter(S, idx.circL, idx.circL, E);

  CMatrix SERi = CMatrix::Zero(nb, nc);  // S(:, starL) R*^{-1}
  {
    const CMatrix top = CMatrix::Identity(nc, nc) + AU * E * V;
    const CMatrix bot = -E * V;
    for (size_t i = 0; i < idx.starL.size(); ++i) SERi.row(idx.starL[i]) = top.row(i);
    for (size_t i = 0; i < idx.circL.size(); ++i) SERi.row(idx.circL[i]) = bot.row(i);
  }

  CMatrix PW_full = CMatrix::Zero(nb, nc);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nc; ++j) PW_full(i, j) = pro.P_Wbc(i, j);

  const CMatrix A1 = PW_full.transpose() * SERi;
  CMatrix A2(nc, nc);
  for (size_t i = 0; i < idx.starL.size(); ++i) A2.row(i) = P_fbc.row(idx.starL[i]);

  // D0 = P_W^T S I^o P_fbc
  CMatrix IoPf = CMatrix::Zero(nb, nc);
  for (size_t i = 0; i < idx.circL.size(); ++i)
    IoPf.row(idx.circL[i]) = P_fbc.row(idx.circL[i]);
  const CMatrix D0 = PW_full.transpose() * (S * IoPf);

  // A2 vanishes on the circS columns (the identity corners of P_fbc live in
  // circ rows), so those columns of X equal D0 outright and only the starS
  // column block needs the vectorized solve.
  const int ns = static_cast<int>(idx.starS.size());
  const int ncc = static_cast<int>(idx.circS.size());
  CMatrix Dc(nc, ncc), Ds(nc, ns), Ass(ns, ns), Acs(ncc, ns);
  for (int j = 0; j < ncc; ++j) Dc.col(j) = D0.col(idx.circS[j]);
  for (int j = 0; j < ns; ++j) Ds.col(j) = D0.col(idx.starS[j]);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) Ass(i, j) = A2(idx.starS[i], idx.starS[j]);
  for (int i = 0; i < ncc; ++i)
    for (int j = 0; j < ns; ++j) Acs(i, j) = A2(idx.circS[i], idx.starS[j]);

  const CMatrix rhs = A1 * Dc * Acs + Ds;
  const CMatrix Xs = linalg::kron_linear_solve(A1, Ass, rhs);

  CMatrix X(nc, nc);
  for (int j = 0; j < ncc; ++j) X.col(idx.circS[j]) = Dc.col(j);
  for (int j = 0; j < ns; ++j) X.col(idx.starS[j]) = Xs.col(j);
  return X;
}

} // namespace rcip::core
