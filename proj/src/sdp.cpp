#include "pasec/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pasec {

EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square and nonempty");
  }
  const double dev = (m - m.adjoint()).norm();
  if (dev > 1e-10 * std::max(1.0, m.norm())) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

using BlockMat = std::vector<Eigen::MatrixXcd>;

// Equality-only internal form: min <c, X> s.t. A_i(X) = b_i, X >= 0.
struct InternalProblem {
  std::vector<int> dims;
  BlockMat cmin;                                        // dense per block
  std::vector<std::vector<Eigen::MatrixXcd>> rows;      // rows[i][k], dense
  Eigen::VectorXd b;
};

int total_dim(const InternalProblem& pr) {
  int n = 0;
  for (int d : pr.dims) n += d;
  return n;
}

double block_dot(const BlockMat& a, const BlockMat& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += a[k].cwiseProduct(b[k].conjugate()).sum().real();
  }
  return s;
}

double block_norm(const BlockMat& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

Eigen::VectorXd apply_map(const InternalProblem& pr, const BlockMat& x) {
  Eigen::VectorXd out(pr.b.size());
  for (Eigen::Index i = 0; i < pr.b.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < pr.dims.size(); ++k) {
      s += pr.rows[i][k].cwiseProduct(x[k].conjugate()).sum().real();
    }
    out(i) = s;
  }
  return out;
}

BlockMat apply_adjoint(const InternalProblem& pr, const Eigen::VectorXd& y) {
  BlockMat out(pr.dims.size());
  for (std::size_t k = 0; k < pr.dims.size(); ++k) {
    out[k] = Eigen::MatrixXcd::Zero(pr.dims[k], pr.dims[k]);
    for (Eigen::Index i = 0; i < y.size(); ++i) out[k] += y(i) * pr.rows[i][k];
  }
  return out;
}

void symmetrize(BlockMat& x) {
  for (auto& m : x) m = 0.5 * (m + m.adjoint().eval());
}

// Functions of a Hermitian PD matrix through its eigensystem, with the
// spectrum floored to keep inverse powers finite near the cone boundary.
struct PdFunctions {
  Eigen::MatrixXcd sqrt;
  Eigen::MatrixXcd inv_sqrt;
  Eigen::MatrixXcd inv;
  bool ok = false;
};

PdFunctions pd_functions(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  PdFunctions out;
  if (es.info() != Eigen::Success) return out;
  Eigen::VectorXd lam = es.eigenvalues();
  const double top = lam(lam.size() - 1);
  if (!(top > 0.0)) return out;
  const double floor = std::max(top * 1e-18, 1e-280);
  Eigen::VectorXd ls(lam.size()), lis(lam.size()), li(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double l = std::max(lam(i), floor);
    ls(i) = std::sqrt(l);
    lis(i) = 1.0 / ls(i);
    li(i) = 1.0 / l;
  }
  const Eigen::MatrixXcd& u = es.eigenvectors();
  out.sqrt = u * ls.asDiagonal() * u.adjoint();
  out.inv_sqrt = u * lis.asDiagonal() * u.adjoint();
  out.inv = u * li.asDiagonal() * u.adjoint();
  out.ok = true;
  return out;
}

// Largest alpha <= 1 with X + alpha dX staying PSD, shrunk by the
// fraction-to-boundary factor; x_inv_sqrt comes from the current iterate.
double step_length(const BlockMat& dx, const std::vector<PdFunctions>& fx) {
  double alpha = 1.0;
  for (std::size_t k = 0; k < dx.size(); ++k) {
    Eigen::MatrixXcd n = fx[k].inv_sqrt * dx[k] * fx[k].inv_sqrt;
    n = 0.5 * (n + n.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(n);
    if (es.info() != Eigen::Success) return 0.0;
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, 0.98 / (-lmin));
  }
  return alpha;
}

struct IpmOut {
  BlockMat x;
  Eigen::VectorXd y;
  double pobj_min = 0.0;
  double rel_gap = std::numeric_limits<double>::infinity();
  double primal_res = std::numeric_limits<double>::infinity();
  double dual_res = std::numeric_limits<double>::infinity();
  int iters = 0;
  bool converged = false;
};

IpmOut ipm_solve(const InternalProblem& pr, const SdpOptions& opts) {
  const std::size_t nblocks = pr.dims.size();
  const int m = static_cast<int>(pr.b.size());
  const int n = total_dim(pr);

  BlockMat x(nblocks), s(nblocks);
  double dual_scale = 1.0;
  for (std::size_t k = 0; k < nblocks; ++k) dual_scale = std::max(dual_scale, pr.cmin[k].norm());
  for (std::size_t k = 0; k < nblocks; ++k) {
    x[k] = Eigen::MatrixXcd::Identity(pr.dims[k], pr.dims[k]);
    s[k] = dual_scale * Eigen::MatrixXcd::Identity(pr.dims[k], pr.dims[k]);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  const double b_scale = 1.0 + pr.b.norm();
  const double c_scale = 1.0 + block_norm(pr.cmin);
  const double mu0 = block_dot(x, s) / n;

  IpmOut best;
  best.x = x;
  best.y = y;
  double best_merit = std::numeric_limits<double>::infinity();

  BlockMat rd(nblocks), w(nblocks), e(nblocks), dx(nblocks), ds(nblocks), z(nblocks);
  std::vector<PdFunctions> fx(nblocks), fs(nblocks);
  Eigen::VectorXd y_step = Eigen::VectorXd::Zero(m);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Eigen::VectorXd rp = pr.b - apply_map(pr, x);
    const BlockMat aty = apply_adjoint(pr, y);
    for (std::size_t k = 0; k < nblocks; ++k) rd[k] = pr.cmin[k] - aty[k] - s[k];

    const double xs = block_dot(x, s);
    const double mu = xs / n;
    const double pobj = block_dot(pr.cmin, x);
    const double dobj = pr.b.dot(y);
    const double rel_gap = std::abs(xs) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double pres = rp.norm() / b_scale;
    double dres = 0.0;
    for (const auto& r : rd) dres += r.squaredNorm();
    dres = std::sqrt(dres) / c_scale;

    const double merit = rel_gap + pres + dres;
    if (merit < best_merit) {
      best_merit = merit;
      best.x = x;
      best.y = y;
      best.pobj_min = pobj;
      best.rel_gap = rel_gap;
      best.primal_res = pres;
      best.dual_res = dres;
      best.iters = iter;
    }

    if (rel_gap <= opts.gap_tol && pres <= opts.feas_tol && dres <= opts.feas_tol) {
      best.converged = true;
      return best;
    }
    if (!std::isfinite(mu) || (mu < 1e-10 * mu0 && pres > 1e3 * opts.feas_tol)) {
      break;  // the central path is collapsing without primal feasibility
    }

    bool scaling_ok = true;
    for (std::size_t k = 0; k < nblocks; ++k) {
      fx[k] = pd_functions(x[k]);
      fs[k] = pd_functions(s[k]);
      if (!fx[k].ok || !fs[k].ok) {
        scaling_ok = false;
        break;
      }
      // Scaling point W with W S W = X.
      Eigen::MatrixXcd t = fx[k].sqrt * s[k] * fx[k].sqrt;
      t = 0.5 * (t + t.adjoint().eval());
      const PdFunctions ft = pd_functions(t);
      if (!ft.ok) {
        scaling_ok = false;
        break;
      }
      w[k] = fx[k].sqrt * ft.inv_sqrt * fx[k].sqrt;
      w[k] = 0.5 * (w[k] + w[k].adjoint().eval());
    }
    if (!scaling_ok) break;

    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < nblocks; ++k) {
        if (pr.rows[i][k].isZero(0.0)) continue;
        const Eigen::MatrixXcd v = w[k] * pr.rows[i][k] * w[k];
        for (int j = 0; j <= i; ++j) {
          schur(i, j) += pr.rows[j][k].cwiseProduct(v.conjugate()).sum().real();
        }
      }
    }
    // LDLT reads the lower triangle, which is the part filled above.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);
    if (ldlt.info() != Eigen::Success) {
      schur.diagonal().array() += 1e-12 * (1.0 + schur.diagonal().maxCoeff());
      ldlt.compute(schur);
      if (ldlt.info() != Eigen::Success) break;
    }

    // One Newton solve of the scaled system for a given centering target Z:
    //   dX + W dS W = Z - X_term, with dS = Rd - A*(dy).
    auto direction = [&](const BlockMat& zc) -> bool {
      for (std::size_t k = 0; k < nblocks; ++k) {
        e[k] = zc[k] - w[k] * rd[k] * w[k];
      }
      const Eigen::VectorXd rhs = rp - apply_map(pr, e);
      const Eigen::VectorXd dy = ldlt.solve(rhs);
      if (!dy.allFinite()) return false;
      const BlockMat atdy = apply_adjoint(pr, dy);
      for (std::size_t k = 0; k < nblocks; ++k) {
        ds[k] = rd[k] - atdy[k];
        dx[k] = e[k] + w[k] * atdy[k] * w[k];
      }
      symmetrize(dx);
      symmetrize(ds);
      // dy is only needed through A*(dy) except for the y update
      y_step = dy;
      return true;
    };

    // affine direction: drive XS toward zero
    for (std::size_t k = 0; k < nblocks; ++k) z[k] = -x[k];
    if (!direction(z)) break;
    const double ap_aff = step_length(dx, fx);
    const double ad_aff = step_length(ds, fs);
    const double mu_aff =
        (xs + ap_aff * block_dot(dx, s) + ad_aff * block_dot(x, ds) +
         ap_aff * ad_aff * block_dot(dx, ds)) /
        n;
    const double ratio = std::max(mu_aff, 0.0) / mu;
    const double sigma = std::clamp(ratio * ratio * ratio, 1e-4, 0.8);

    for (std::size_t k = 0; k < nblocks; ++k) {
      z[k] = sigma * mu * fs[k].inv - x[k];
    }
    if (!direction(z)) break;
    const double ap = step_length(dx, fx);
    const double ad = step_length(ds, fs);

    for (std::size_t k = 0; k < nblocks; ++k) {
      x[k] += ap * dx[k];
      s[k] += ad * ds[k];
    }
    symmetrize(x);
    symmetrize(s);
    y += ad * y_step;
  }

  return best;
}

}  // namespace

SdpSolution solve_sdp(const SdpStandardForm& problem, const SdpOptions& opts) {
  // validation and conversion to the equality-only internal form
  const int nuser = static_cast<int>(problem.block_dims.size());
  if (nuser == 0) throw std::invalid_argument("solve_sdp: no variable blocks");
  for (int d : problem.block_dims) {
    if (d < 1) throw std::invalid_argument("solve_sdp: block dims must be >= 1");
  }
  const int m = static_cast<int>(problem.equalities.size() + problem.inequalities.size());
  if (m == 0) throw std::invalid_argument("solve_sdp: need at least one constraint");

  InternalProblem pr;
  pr.dims.assign(problem.block_dims.begin(), problem.block_dims.end());
  const int nineq = static_cast<int>(problem.inequalities.size());
  for (int j = 0; j < nineq; ++j) pr.dims.push_back(1);  // slack scalars

  auto check_term = [&](const SdpTerm& t) -> Eigen::MatrixXcd {
    if (t.block < 0 || t.block >= nuser) {
      throw std::invalid_argument("solve_sdp: term references unknown block");
    }
    const int d = problem.block_dims[t.block];
    if (t.coeff.rows() != d || t.coeff.cols() != d) {
      throw std::invalid_argument("solve_sdp: coefficient dimension mismatch");
    }
    if ((t.coeff - t.coeff.adjoint()).norm() > 1e-8 * (1.0 + t.coeff.norm())) {
      throw std::invalid_argument("solve_sdp: coefficient must be Hermitian");
    }
    return 0.5 * (t.coeff + t.coeff.adjoint().eval());
  };

  const std::size_t nall = pr.dims.size();
  pr.cmin.resize(nall);
  for (std::size_t k = 0; k < nall; ++k) {
    pr.cmin[k] = Eigen::MatrixXcd::Zero(pr.dims[k], pr.dims[k]);
  }
  for (const SdpTerm& t : problem.objective) {
    pr.cmin[t.block] -= check_term(t);  // internal sense is minimization
  }

  pr.b.resize(m);
  pr.rows.resize(m);
  int row = 0;
  auto add_row = [&](const SdpConstraint& con, int slack) {
    if (!std::isfinite(con.rhs)) {
      throw std::invalid_argument("solve_sdp: constraint rhs must be finite");
    }
    auto& r = pr.rows[row];
    r.resize(nall);
    for (std::size_t k = 0; k < nall; ++k) {
      r[k] = Eigen::MatrixXcd::Zero(pr.dims[k], pr.dims[k]);
    }
    for (const SdpTerm& t : con.terms) r[t.block] += check_term(t);
    if (slack >= 0) r[nuser + slack](0, 0) = 1.0;
    double scale = 0.0;
    for (const auto& mat : r) scale = std::max(scale, mat.norm());
    if (scale <= 0.0) {
      throw std::invalid_argument("solve_sdp: constraint has no coefficients");
    }
    for (auto& mat : r) mat /= scale;
    pr.b(row) = con.rhs / scale;
    ++row;
  };
  for (const auto& con : problem.equalities) add_row(con, -1);
  for (int j = 0; j < nineq; ++j) add_row(problem.inequalities[j], j);

  IpmOut out = ipm_solve(pr, opts);

  SdpSolution sol;
  sol.blocks.assign(out.x.begin(), out.x.begin() + nuser);
  sol.objective = -out.pobj_min;
  sol.duality_gap = out.rel_gap;
  sol.primal_residual = out.primal_res;
  sol.iterations = out.iters;
  if (out.converged) {
    sol.status = SdpStatus::Optimal;
    return sol;
  }

  // Phase-1 certificate: min nu s.t. A(X) + nu (b - A(I)) = b over X >= 0,
  // nu >= 0.  (I, 1) is feasible, so this always has an answer; a minimum
  // bounded away from zero certifies an empty feasible set.
  InternalProblem ph;
  ph.dims = pr.dims;
  ph.dims.push_back(1);
  const std::size_t nu_idx = ph.dims.size() - 1;
  BlockMat ident(pr.dims.size());
  for (std::size_t k = 0; k < pr.dims.size(); ++k) {
    ident[k] = Eigen::MatrixXcd::Identity(pr.dims[k], pr.dims[k]);
  }
  const Eigen::VectorXd resid = pr.b - apply_map(pr, ident);
  ph.cmin.resize(ph.dims.size());
  for (std::size_t k = 0; k < ph.dims.size(); ++k) {
    ph.cmin[k] = Eigen::MatrixXcd::Zero(ph.dims[k], ph.dims[k]);
  }
  ph.cmin[nu_idx](0, 0) = 1.0;
  ph.b = pr.b;
  ph.rows.resize(m);
  for (int i = 0; i < m; ++i) {
    ph.rows[i] = pr.rows[i];
    ph.rows[i].push_back(Eigen::MatrixXcd::Constant(1, 1, resid(i)));
  }
  SdpOptions ph_opts = opts;
  ph_opts.max_iters = std::max(opts.max_iters, 100);
  const IpmOut p1 = ipm_solve(ph, ph_opts);
  if (p1.converged &&
      p1.x[nu_idx](0, 0).real() > 1e-7 * (1.0 + pr.b.lpNorm<Eigen::Infinity>())) {
    sol.status = SdpStatus::Infeasible;
  } else {
    sol.status = SdpStatus::MaxIters;
  }
  return sol;
}

}  // namespace pasec
