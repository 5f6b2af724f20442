#include "rcip/solver.hpp"

#include <stdexcept>

#include "rcip/linalg.hpp"

namespace rcip::solver {

CompressedSystem assemble_compressed(const geom::Mesh& mesh,
                                     const CMatrix& K_coa,
                                     const std::vector<SingularReduction>& reds,
                                     const CVector& f_coa) {
  const int n = mesh.size();
  CompressedSystem sys;
  sys.K_circ = K_coa;
  sys.R_global = CMatrix::Identity(n, n);
  sys.r_f_global = CVector::Zero(n);
  sys.f_circ = f_coa;

  for (const auto& red : reds) {
    const auto& g = red.star_global;
    for (size_t p = 0; p < g.size(); ++p)
      for (size_t q = 0; q < g.size(); ++q) {
        sys.K_circ(g[p], g[q]) = Complex(0, 0);
        sys.R_global(g[p], g[q]) = red.ops.R_block(p, q);
      }
    for (size_t p = 0; p < g.size(); ++p) {
      sys.r_f_global[g[p]] = red.ops.r_f_star[p];
      sys.f_circ[g[p]] = Complex(0, 0);
    }
  }
  sys.A = CMatrix::Identity(n, n) + sys.K_circ * sys.R_global;
  sys.rhs = sys.f_circ - sys.K_circ * sys.r_f_global;
  return sys;
}

SolveResult solve_compressed(const geom::Mesh& mesh, const CompressedSystem& sys,
                             const SolveOptions& opt) {
  SolveResult res;
  if (opt.use_gmres) {
    auto apply = [&sys](const CVector& x) { return CVector(sys.A * x); };
    auto g = linalg::gmres_solve(apply, sys.rhs, opt.gmres_tol,
                                 opt.gmres_max_iter);
    res.v_tilde_coa = g.x;
    res.gmres_iters = g.iters;
  } else {
    res.v_tilde_coa = linalg::lu_solve(sys.A, CMatrix(sys.rhs));
  }
  res.rho_hat_coa = sys.R_global * res.v_tilde_coa + sys.r_f_global;
  res.q = functional_q(mesh, res.rho_hat_coa);
  return res;
}

Complex functional_q(const geom::Mesh& mesh, const CVector& rho_hat,
                     const std::function<Complex(int)>& h_at_node) {
  Complex q(0, 0);
  for (int i = 0; i < mesh.size(); ++i)
    q += h_at_node(i) * rho_hat[i] * mesh.speeds[i] * mesh.weights[i];
  return q;
}

Complex functional_q(const geom::Mesh& mesh, const CVector& rho_hat) {
  return functional_q(mesh, rho_hat, [](int) { return Complex(1, 0); });
}

FineSolution backward_reconstruction(const SingularReduction& red,
                                     const CVector& v_tilde_coa) {
  const auto& arch = red.ops.archive;
  if (arch.empty() || static_cast<int>(arch.size()) != red.ops.n_sub)
    throw std::invalid_argument(
        "backward_reconstruction: forward archive missing or incomplete");
  const bool one_sided = red.ops.one_sided;
  const auto idx = geom::index_sets(one_sided);
  const auto& pro = quad::prolongation(one_sided);
  const int nb = idx.nb, nc = idx.nc;

  CMatrix P_bc = CMatrix::Zero(nb, nc);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nc; ++j) P_bc(i, j) = pro.P_bc(i, j);

  // star restriction of v~ in local ascending-offset order
  CVector vcur(nc);
  for (int i = 0; i < nc; ++i) vcur[i] = v_tilde_coa[red.star_global[i]];
  CVector gcur = CVector::Zero(nc);

  FineSolution fine;
  fine.levels.reserve(arch.size());

  for (int li = red.ops.n_sub - 1; li >= 0; --li) {
    const auto& d = arch[li];
    const auto& g = d.grid;
    // K^o = M_circ - I^o
    CMatrix Ko = d.M_circ;
    for (int i : idx.circL) Ko(i, i) -= Complex(1, 0);

    const CVector Pv = P_bc * vcur;
    const CVector rho_vec =
        Pv - Ko * core::apply_compressed_inverse(d.M_circ, d.R_prev, Pv, idx);

    // second term of the g recursion: K^o S (F{R^{-1} r*} + f^o)
    const CMatrix U = [&] {
      CMatrix u(idx.starL.size(), idx.circL.size());
      for (size_t i = 0; i < idx.starL.size(); ++i)
        for (size_t j = 0; j < idx.circL.size(); ++j)
          u(i, j) = d.M_circ(idx.starL[i], idx.circL[j]);
      return u;
    }();
    const CMatrix V = [&] {
      CMatrix v(idx.circL.size(), idx.starL.size());
      for (size_t i = 0; i < idx.circL.size(); ++i)
        for (size_t j = 0; j < idx.starL.size(); ++j)
          v(i, j) = d.M_circ(idx.circL[i], idx.starL[j]);
      return v;
    }();
    const CMatrix D = [&] {
      CMatrix m(idx.circL.size(), idx.circL.size());
      for (size_t i = 0; i < idx.circL.size(); ++i)
        for (size_t j = 0; j < idx.circL.size(); ++j)
          m(i, j) = d.M_circ(idx.circL[i], idx.circL[j]);
      return m;
    }();
    CVector f_circ(idx.circL.size());
    for (size_t i = 0; i < idx.circL.size(); ++i)
      f_circ[i] = d.f_b[idx.circL[i]];
    const CVector e =
        linalg::lu_solve(D - (V * d.R_prev) * U, CMatrix(f_circ - V * d.rf_prev));
    CVector u96 = CVector::Zero(nb);
    {
      const CVector us = d.rf_prev - d.R_prev * (U * e);
      for (size_t i = 0; i < idx.starL.size(); ++i) u96[idx.starL[i]] = us[i];
      for (size_t i = 0; i < idx.circL.size(); ++i) u96[idx.circL[i]] = e[i];
    }
    const CVector Pg = P_bc * gcur;
    const CVector g_smo =
        Pg - Ko * core::apply_compressed_inverse(d.M_circ, d.R_prev, Pg, idx) -
        Ko * u96;

    FineSolution::LevelValues lv;
    lv.level = d.level;
    const int ncirc = static_cast<int>(idx.circL.size());
    lv.t.resize(ncirc);
    lv.weights.resize(ncirc);
    lv.speeds.resize(ncirc);
    lv.v.resize(ncirc);
    lv.g.resize(ncirc);
    for (int i = 0; i < ncirc; ++i) {
      const int bi = idx.circL[i];
      lv.t[i] = g.t[bi];
      lv.weights[i] = g.weights[bi];
      lv.speeds[i] = g.speeds[bi];
      lv.v[i] = rho_vec[bi];
      lv.g[i] = g_smo[bi] + d.f_b[bi];
    }
    fine.levels.push_back(std::move(lv));

    // pass the star parts down
    for (size_t i = 0; i < idx.starL.size(); ++i) {
      vcur[i] = rho_vec[idx.starL[i]];
      gcur[i] = g_smo[idx.starL[i]];
    }

    if (li == 0) {
      // innermost panels: weight-corrected values R_0 v~_0 + (R_0 g~_0 + r_f0*)
      const CVector rho_in = d.R_prev * vcur + d.R_prev * gcur + d.rf_prev;
      fine.t_inner.resize(nc);
      fine.w_inner.resize(nc);
      fine.speeds_inner.resize(nc);
      fine.rho_inner = rho_in;
      for (size_t i = 0; i < idx.starL.size(); ++i) {
        const int bi = idx.starL[i];
        fine.t_inner[i] = g.t[bi];
        fine.w_inner[i] = g.weights[bi];
        fine.speeds_inner[i] = g.speeds[bi];
      }
    }
  }
  return fine;
}

Complex functional_q_fine(const geom::Mesh& mesh, const CVector& v_tilde_coa,
                          const std::vector<SingularReduction>& reds,
                          const std::vector<FineSolution>& fines) {
  // outside every Gamma*, rho = v~ and the grids coincide
  Complex q(0, 0);
  std::vector<bool> in_star(mesh.size(), false);
  for (const auto& red : reds)
    for (int i : red.star_global) in_star[i] = true;
  for (int i = 0; i < mesh.size(); ++i)
    if (!in_star[i])
      q += v_tilde_coa[i] * mesh.speeds[i] * mesh.weights[i];
  for (const auto& fine : fines) {
    for (const auto& lv : fine.levels)
      for (int i = 0; i < lv.t.size(); ++i)
        q += (lv.v[i] + lv.g[i]) * lv.speeds[i] * lv.weights[i];
    for (int i = 0; i < fine.t_inner.size(); ++i)
      q += fine.rho_inner[i] * fine.speeds_inner[i] * fine.w_inner[i];
  }
  return q;
}

LaplaceRun run_laplace(const geom::Contour& contour,
                       const models::LaplaceDlpKernel& kernel,
                       const models::RhsModel& f, const LaplaceOptions& opt) {
  LaplaceRun run;
  run.mesh = geom::build_coarse_mesh(contour, opt.npan);

  core::LocalAssembler assemble = [&](const geom::LocalGrid& g) {
    return core::system_matrix_type_b(kernel, g);
  };

  core::ForwardOptions fo;
  fo.n_sub = opt.n_sub;
  fo.npan = opt.npan;
  fo.keep_archive = opt.want_fine;
  if (opt.fixed_point_init) {
    const auto fp = core::fixed_point_R(contour, 0, assemble, opt.npan);
    const auto idx = geom::index_sets(contour.singular_points()[0].one_sided);
    fo.R0 = fp.R_star;
    fo.Rf0 = core::fixed_point_Rf(fp, f, idx);
  }
  run.forward = core::forward_recursion(contour, 0, assemble, f, fo);

  SingularReduction red;
  red.gamma = 0;
  red.ops = run.forward.ops;
  red.star_global = run.mesh.star_nodes(0);
  run.reductions = {red};

  // coarse Nystrom matrix
  const int n = run.mesh.size();
  CMatrix K(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const Complex k =
          (p == q)
              ? kernel.diagonal_limit(run.mesh.zpnodes[p], run.mesh.zppnodes[p])
              : kernel.eval(run.mesh.znodes[p], run.mesh.normals[p],
                            run.mesh.znodes[q], run.mesh.normals[q]);
      K(p, q) = k * run.mesh.speeds[q] * run.mesh.weights[q];
    }

  CVector f_coa(n);
  for (int i = 0; i < n; ++i)
    f_coa[i] = f.eval(run.mesh.node_gamma[i], run.mesh.node_offset[i]);

  const auto sys = assemble_compressed(run.mesh, K, run.reductions, f_coa);
  SolveOptions so;
  so.use_gmres = opt.use_gmres;
  run.solve = solve_compressed(run.mesh, sys, so);
  run.q_coa = run.solve.q;

  if (opt.want_fine) {
    run.fines.push_back(
        backward_reconstruction(run.reductions[0], run.solve.v_tilde_coa));
    run.q_fin = functional_q_fine(run.mesh, run.solve.v_tilde_coa,
                                  run.reductions, run.fines);
  }
  return run;
}

} // namespace rcip::solver
