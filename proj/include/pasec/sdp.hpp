#pragma once

#include <vector>

#include <Eigen/Dense>

namespace pasec {

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns, unitary
};

// Throws std::invalid_argument when m deviates from Hermitian by more than
// 1e-10 relative to its norm.
EigenDecomposition hermitian_eig(const Eigen::MatrixXcd& m);

// One Hermitian coefficient acting on block `block` of the variable.
struct SdpTerm {
  int block = 0;
  Eigen::MatrixXcd coeff;
};

struct SdpConstraint {
  std::vector<SdpTerm> terms;
  double rhs = 0.0;
};

// maximize    sum_k Re Tr(C_k X_k)
// subject to  sum_k Re Tr(A_jk X_k)  = b_j
//             sum_k Re Tr(G_jk X_k) <= g_j
//             X_k >= 0  (Hermitian PSD; 1x1 blocks are nonnegative scalars)
struct SdpStandardForm {
  std::vector<int> block_dims;
  std::vector<SdpTerm> objective;
  std::vector<SdpConstraint> equalities;
  std::vector<SdpConstraint> inequalities;
};

enum class SdpStatus { Optimal, MaxIters, Infeasible };

struct SdpOptions {
  double gap_tol = 1e-8;   // relative duality gap
  double feas_tol = 1e-9;  // relative primal residual
  int max_iters = 100;
};

struct SdpSolution {
  std::vector<Eigen::MatrixXcd> blocks;
  double objective = 0.0;
  double duality_gap = 0.0;    // relative
  double primal_residual = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::MaxIters;
};

// Dense primal-dual path-following interior-point solve.  Designed for the
// small problems produced by the beamforming subproblems (a handful of blocks
// of dimension <= 8, tens of constraints).
SdpSolution solve_sdp(const SdpStandardForm& problem, const SdpOptions& opts = {});

}  // namespace pasec
