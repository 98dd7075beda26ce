#pragma once

#include <cstdint>
#include <vector>

#include "disca/reduction.hpp"
#include "disca/sample_matrix.hpp"

namespace disca {

//! Parameters of the augmented-Lagrangian / DCA / ADMM solver and of the
//! independence test used by the elimination loop.
struct SolverConfig {
  double xi0 = 1.0;        //!< initial penalty
  double xi_growth = 2.0;  //!< penalty multiplier per outer iteration
  double xi_max = 1e6;     //!< penalty cap (the convexity guard may exceed it)
  double psi0 = 0.0;       //!< initial multiplier
  double outer_tol = 1e-6; //!< outer loop stops once | ||u|| - 1 | < outer_tol

  //! ADMM penalty. With adaptive_rho the DCA driver uses
  //! rho * xi / sqrt(lambda_max * lambda_min) of M+'M+ instead.
  double rho = 1.0;
  bool adaptive_rho = true;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;

  double dca_tol = 1e-6;
  int max_dca_iters = 2000;
  int max_admm_iters = 5000;
  int max_outer_iters = 50;
  int n_restarts = 5;
  std::uint64_t seed = 0;

  //! Refine each ADMM solution to the exact subproblem minimizer when possible.
  bool polish = true;

  double alpha = 0.05;  //!< significance level of the elimination test

  //! Throws InvalidParameter when any field is out of range.
  void validate() const;
};

//! (S(x, r))_i = sgn(x_i) max(|x_i| - r, 0).
VectorXd soft_threshold(const VectorXd& x, double r);

//! The subgradient of h(u) = ||M- u||_1 + (xi - psi)||u||_2 chosen by DCA.
//! Sign subgradients at zero components of M- u are taken as 0.
VectorXd subgradient_h(const VectorXd& u, const MatrixXd& m_minus, double xi, double psi);

//! h(u) = ||M- u||_1 + (xi - psi)||u||_2.
double h_value(const VectorXd& u, const MatrixXd& m_minus, double xi, double psi);

//! L(u; psi, xi) = ||M+u||_1 - ||M-u||_1 + psi(||u|| - 1) + xi/2 (||u|| - 1)^2.
double augmented_lagrangian(const SignedDiffProblem& problem, const VectorXd& u, double xi,
                            double psi);

//! ADMM splitting variables carried between consecutive subproblem solves.
struct AdmmState {
  VectorXd z;
  VectorXd v;
};

struct AdmmResult {
  VectorXd u;
  AdmmState state;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double primal_tolerance = 0.0;
  double dual_tolerance = 0.0;
  bool polished = false;  //!< u was replaced by the verified exact minimizer
};

//! Exact minimization of xi/2 u'u - b'u + ||A u||_1 from a starting point,
//! by descent on the quadratic pieces with exact line searches.
struct PolishResult {
  VectorXd u;
  VectorXd dual;  //!< subgradient of ||.||_1 at A u, one entry per row
  bool optimal = false;
  int iterations = 0;
  double residual = 0.0;  //!< norm of the smallest element of the subdifferential
};

PolishResult polish_subproblem(const MatrixXd& a, double xi, const VectorXd& b, const VectorXd& u0,
                               int max_iters = 200);

//! Merges rows that are positive or negative multiples of each other into one
//! row carrying the summed norms, and drops zero rows. ||A u||_1 is unchanged.
MatrixXd merge_parallel_rows(const MatrixXd& rows);

//! Solves min_u xi/2 u'u + ||M+ u||_1 - y'u by ADMM with the splitting
//! M+ u = z. The factorization of (xi I + rho M+'M+) is computed once and
//! reused for every solve() call.
class AdmmSubproblem {
 public:
  AdmmSubproblem(const MatrixXd& m_plus, double xi, double rho);

  //! Runs ADMM from `warm` (zero state when its vectors are empty). cfg.rho is
  //! ignored; the penalty fixed at construction is used.
  AdmmResult solve(const VectorXd& y, double eps_abs, double eps_rel, int max_iters,
                   const AdmmState& warm) const;

  //! Replaces result.u by the exact minimizer when polish_subproblem verifies
  //! it, and resets the state to the matching (z, v). Returns whether it did.
  bool polish(const VectorXd& y, AdmmResult& result) const;

  double xi() const noexcept { return xi_; }
  double rho() const noexcept { return rho_; }

 private:
  const MatrixXd& m_plus_;
  double xi_;
  double rho_;
  MatrixXd gram_;
  Eigen::LLT<MatrixXd> factor_;
};

//! One-shot ADMM solve using cfg.rho, cfg.eps_abs, cfg.eps_rel and
//! cfg.max_admm_iters.
AdmmResult admm_subproblem(const MatrixXd& m_plus, double xi, const VectorXd& y_k,
                           const SolverConfig& cfg, const AdmmState& warm = {});

//! Per-run record of a DCA solve at fixed (xi, psi).
struct DcaTrace {
  double xi = 0.0;
  double psi = 0.0;
  double rho = 0.0;
  std::vector<double> lagrangian;  //!< L(u_0), L(u_1), ...
  std::vector<double> step_sq;     //!< ||u_{k+1} - u_k||^2, one per step
  int admm_iterations = 0;
  int admm_unconverged = 0;  //!< inner solves that hit the iteration cap
  int polished = 0;          //!< inner solves refined to the exact minimizer
  bool converged = false;
};

struct DcaResult {
  VectorXd u;
  DcaTrace trace;
  AdmmState state;  //!< final ADMM variables, for warm starts
};

//! DCA on L(.; psi, xi): y_k in dh(u_k), u_{k+1} = argmin xi/2 u'u + ||M+u||_1 - y_k'u.
//! Stops when max_i |du_i| / max(|u_i|, 1e-12) < dca_tol or
//! ||du|| / max(||u||, 1e-12) < dca_tol. Uses cfg.rho literally.
DcaResult dca_solve(const SignedDiffProblem& problem, double xi, double psi, const VectorXd& u0,
                    const SolverConfig& cfg, const AdmmState& warm = {});

//! Result of minimizing ||M+u||_1 - ||M-u||_1 over the unit sphere.
struct DirectionResult {
  VectorXd u;                     //!< unit norm, first nonzero entry positive
  double objective_value = 0.0;   //!< objective(problem, u) on the input problem
  double v2n = 0.0;               //!< (2 / N^2) objective_value
  double statistic = 0.0;         //!< filled by the sample-based overload, NaN otherwise
  std::vector<double> lagrangian_trace;  //!< concatenated DCA traces of the winning restart
  bool converged = false;
  int restarts_used = 0;          //!< restarts that produced a usable direction

  // Diagnostics of the winning restart, expressed on the scaled working problem
  // (M+ / scale, M- / scale) that the optimizer actually ran on.
  int best_restart = -1;
  double scale = 1.0;
  double final_xi = 0.0;
  double final_psi = 0.0;
  VectorXd raw_u;                 //!< last DCA iterate before renormalization
  std::vector<DcaTrace> dca_runs; //!< DCA runs of every restart, in order
};

//! Multistart augmented-Lagrangian minimization over the unit sphere.
//! Throws SolverFailure when no restart produces a usable direction.
DirectionResult solve_min_direction(const SignedDiffProblem& problem, const SolverConfig& cfg);

//! Builds the problem from samples and fills the test statistic of (Xu, Y).
DirectionResult solve_min_direction(const SampleMatrix& x, const SampleMatrix& y,
                                    const SolverConfig& cfg);

//! First-order residual at u:
//!   min over admissible signs || M+'s+ - M-'s- + xi u - (xi - psi) u/||u|| ||_2,
//! where components with |(M u)_i| <= kink_tol ||M_i|| ||u|| may take any sign in [-1, 1].
double stationarity_residual(const SignedDiffProblem& problem, const VectorXd& u, double xi,
                             double psi, double kink_tol = 1e-6);

//! Flips u so that its first entry with magnitude above 1e-12 ||u|| is positive.
VectorXd sign_normalized(const VectorXd& u);

//! The working problem scaled by 1/scale.
SignedDiffProblem scaled_problem(const SignedDiffProblem& problem, double scale);

//! Positive constant the solver divides M+ and M- by so that the objective is O(1).
double problem_scale(const SignedDiffProblem& problem);

}  // namespace disca
