#include "disca/dc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "disca/dcov.hpp"
#include "disca/errors.hpp"
#include "disca/rng.hpp"

namespace disca {

namespace {

double l1_of_product(const MatrixXd& m, const VectorXd& u) {
  return m.rows() == 0 ? 0.0 : (m * u).lpNorm<1>();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter("solver config: " + what);
}

}  // namespace

void SolverConfig::validate() const {
  require(xi0 > 0.0, "xi0 must be positive");
  require(xi_growth > 1.0, "xi_growth must exceed 1");
  require(xi_max >= xi0, "xi_max must be at least xi0");
  require(std::isfinite(psi0), "psi0 must be finite");
  require(outer_tol > 0.0, "outer_tol must be positive");
  require(rho > 0.0, "rho must be positive");
  require(eps_abs > 0.0 && eps_rel > 0.0, "ADMM tolerances must be positive");
  require(dca_tol > 0.0, "dca_tol must be positive");
  require(max_dca_iters >= 1 && max_admm_iters >= 1 && max_outer_iters >= 1 && n_restarts >= 1,
          "iteration and restart counts must be at least 1");
  require(alpha > 0.0 && alpha <= kMaxAlpha, "alpha must lie in (0, 0.215]");
}

VectorXd soft_threshold(const VectorXd& x, double r) {
  if (!(r >= 0.0)) throw InvalidParameter("soft threshold level must be nonnegative");
  return x.unaryExpr([r](double xi) {
    const double shrunk = std::abs(xi) - r;
    if (shrunk <= 0.0) return 0.0;
    return xi > 0.0 ? shrunk : -shrunk;
  });
}

VectorXd subgradient_h(const VectorXd& u, const MatrixXd& m_minus, double xi, double psi) {
  if (!(xi - psi > 0.0)) {
    throw ConvexityViolation("xi - psi = " + std::to_string(xi - psi) + " is not positive");
  }
  if (m_minus.cols() != u.size()) {
    throw DimensionMismatch("M- has " + std::to_string(m_minus.cols()) + " columns, u has length " +
                            std::to_string(u.size()));
  }
  VectorXd y = VectorXd::Zero(u.size());
  if (m_minus.rows() > 0) {
    const VectorXd signs = (m_minus * u).unaryExpr(
        [](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
    y.noalias() += m_minus.transpose() * signs;
  }
  const double norm = u.norm();
  if (norm > 0.0) y += ((xi - psi) / norm) * u;
  return y;
}

double h_value(const VectorXd& u, const MatrixXd& m_minus, double xi, double psi) {
  return l1_of_product(m_minus, u) + (xi - psi) * u.norm();
}

double augmented_lagrangian(const SignedDiffProblem& problem, const VectorXd& u, double xi,
                            double psi) {
  const double r = u.norm() - 1.0;
  return objective(problem, u) + psi * r + 0.5 * xi * r * r;
}

AdmmSubproblem::AdmmSubproblem(const MatrixXd& m_plus, double xi, double rho)
    : m_plus_(m_plus), xi_(xi), rho_(rho) {
  if (!(xi > 0.0)) throw InvalidParameter("ADMM subproblem needs xi > 0");
  if (!(rho > 0.0)) throw InvalidParameter("ADMM subproblem needs rho > 0");
  const Index p = m_plus.cols();
  gram_ = MatrixXd::Zero(p, p);
  if (m_plus.rows() > 0) gram_.noalias() = m_plus.transpose() * m_plus;
  factor_.compute(MatrixXd::Identity(p, p) * xi + rho * gram_);
  if (factor_.info() != Eigen::Success) {
    throw NumericalFailure("Cholesky factorization of the ADMM system failed");
  }
}

AdmmResult AdmmSubproblem::solve(const VectorXd& y, double eps_abs, double eps_rel, int max_iters,
                                 const AdmmState& warm) const {
  const Index n = m_plus_.rows();
  const Index p = m_plus_.cols();
  if (y.size() != p) {
    throw DimensionMismatch("ADMM right-hand side has length " + std::to_string(y.size()) +
                            ", expected " + std::to_string(p));
  }

  AdmmResult out;
  if (n == 0) {
    // Pure quadratic: the minimizer is y / xi.
    out.u = y / xi_;
    out.state.z.resize(0);
    out.state.v.resize(0);
    out.iterations = 1;
    out.converged = true;
    return out;
  }

  VectorXd z = warm.z.size() == n ? warm.z : VectorXd::Zero(n);
  VectorXd v = warm.v.size() == n ? warm.v : VectorXd::Zero(n);
  VectorXd mt_z = m_plus_.transpose() * z;
  VectorXd mt_v = m_plus_.transpose() * v;
  VectorXd mt_z_new(p);
  VectorXd u(p);
  VectorXd mu(n);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  const double inv_rho = 1.0 / rho_;

  for (int l = 0; l < max_iters; ++l) {
    u = factor_.solve(y + rho_ * mt_z - mt_v);
    mu.noalias() = m_plus_ * u;

    // z = S(v / rho + M+u, 1 / rho) and v += rho (M+u - z), fused.
    double r_sq = 0.0;
    double mu_sq = 0.0;
    double z_sq = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double w = inv_rho * v(i) + mu(i);
      const double shrunk = std::abs(w) - inv_rho;
      const double zi = shrunk <= 0.0 ? 0.0 : (w > 0.0 ? shrunk : -shrunk);
      const double diff = mu(i) - zi;
      v(i) += rho_ * diff;
      z(i) = zi;
      r_sq += diff * diff;
      mu_sq += mu(i) * mu(i);
      z_sq += zi * zi;
    }
    mt_z_new.noalias() = m_plus_.transpose() * z;
    // M+'v_{l+1} = M+'v_l + rho (M+'M+ u - M+'z_{l+1}).
    mt_v.noalias() += rho_ * (gram_ * u - mt_z_new);

    out.primal_residual = std::sqrt(r_sq);
    out.dual_residual = rho_ * (mt_z_new - mt_z).norm();
    out.primal_tolerance = sqrt_n * eps_abs + eps_rel * std::sqrt(std::max(mu_sq, z_sq));
    out.dual_tolerance = sqrt_p * eps_abs + eps_rel * mt_v.norm();
    out.iterations = l + 1;
    mt_z.swap(mt_z_new);

    if (out.primal_residual <= out.primal_tolerance && out.dual_residual <= out.dual_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.u = std::move(u);
  out.state.z = std::move(z);
  out.state.v = std::move(v);
  return out;
}

bool AdmmSubproblem::polish(const VectorXd& y, AdmmResult& result) const {
  if (m_plus_.rows() == 0) return false;
  PolishResult exact = polish_subproblem(m_plus_, xi_, y, result.u);
  if (!exact.optimal) return false;
  result.u = std::move(exact.u);
  result.state.z = m_plus_ * result.u;
  result.state.v = std::move(exact.dual);
  result.polished = true;
  return true;
}

namespace {

// min over w in [-1, 1]^k of ||g0 + C w||_2 by cyclic coordinate descent.
// Each coordinate update is exact, so the residual never grows.
VectorXd box_least_squares(const VectorXd& g0, const MatrixXd& cols, VectorXd& w, int max_sweeps) {
  const Index k = cols.cols();
  w = VectorXd::Zero(k);
  VectorXd residual = g0;
  if (k == 0) return residual;
  const VectorXd col_sq = cols.colwise().squaredNorm().transpose();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double largest_change = 0.0;
    for (Index i = 0; i < k; ++i) {
      if (col_sq(i) == 0.0) continue;
      const double next = std::clamp(w(i) - cols.col(i).dot(residual) / col_sq(i), -1.0, 1.0);
      const double change = next - w(i);
      if (change != 0.0) {
        residual.noalias() += change * cols.col(i);
        w(i) = next;
        largest_change = std::max(largest_change, std::abs(change));
      }
    }
    if (largest_change < 1e-15) break;
  }
  return residual;
}

double sign_of(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

PolishResult polish_subproblem(const MatrixXd& a, double xi, const VectorXd& b, const VectorXd& u0,
                               int max_iters) {
  const Index n = a.rows();
  const Index p = a.cols();
  PolishResult out;
  out.u = u0;
  if (n == 0) {
    out.u = b / xi;
    out.dual.resize(0);
    out.optimal = true;
    return out;
  }
  const VectorXd row_norm = a.rowwise().norm();
  VectorXd u = u0;
  VectorXd r(n);
  VectorXd s(n);
  VectorXd ad(n);
  std::vector<Index> zero;
  std::vector<std::pair<double, double>> events;

  auto value = [&](const VectorXd& v) { return 0.5 * xi * v.squaredNorm() - b.dot(v) + (a * v).lpNorm<1>(); };
  // ||b|| / xi bounds the norm of the minimizer, so kinks stay detectable when it is 0.
  const double u_scale = b.norm() / xi;
  for (int it = 0; it < max_iters; ++it) {
    out.iterations = it + 1;
    r.noalias() = a * u;
    const double u_norm = u.norm();
    const double kink_tol = 1e-11 * std::max(u_norm, u_scale);
    zero.clear();
    for (Index i = 0; i < n; ++i) {
      if (std::abs(r(i)) <= kink_tol * row_norm(i)) {
        zero.push_back(i);
        s(i) = 0.0;
      } else {
        s(i) = sign_of(r(i));
      }
    }
    const VectorXd ats = a.transpose() * s;
    const VectorXd g0 = xi * u - b + ats;
    MatrixXd zcols(p, static_cast<Index>(zero.size()));
    double zero_mass = 0.0;
    for (std::size_t j = 0; j < zero.size(); ++j) {
      zcols.col(static_cast<Index>(j)) = a.row(zero[j]).transpose();
      zero_mass += row_norm(zero[j]);
    }
    VectorXd w;
    const VectorXd g = box_least_squares(g0, zcols, w, 20000);
    out.residual = g.norm();
    const double scale = b.norm() + xi * u_norm + ats.norm() + zero_mass;
    const bool certified = out.residual <= 1e-10 * std::max(scale, 1e-300);

    // Newton step on the current piece: rows with an interior multiplier stay
    // on their kink, rows at the bound leave towards the sign of theirs.
    VectorXd c = b - ats;
    std::vector<Index> keep;
    MatrixXd basis(p, 0);
    for (std::size_t j = 0; j < zero.size(); ++j) {
      const double wj = w(static_cast<Index>(j));
      const Index i = zero[j];
      if (std::abs(wj) >= 1.0 - 1e-9) {
        c -= sign_of(wj) * a.row(i).transpose();
        continue;
      }
      if (static_cast<Index>(keep.size()) == p) continue;
      // Keep a linearly independent subset; dependent rows stay at zero anyway.
      VectorXd row = a.row(i).transpose();
      VectorXd rest = row;
      if (basis.cols() > 0) rest -= basis * (basis.transpose() * row);
      if (rest.norm() <= 1e-9 * row.norm()) continue;
      basis.conservativeResize(p, basis.cols() + 1);
      basis.col(basis.cols() - 1) = rest / rest.norm();
      keep.push_back(i);
    }
    VectorXd target = c / xi;
    if (!keep.empty()) target -= basis * (basis.transpose() * target);
    if (certified) {
      // u lies on the optimal piece up to the kink tolerance; its exact minimizer is target.
      out.u = value(target) <= value(u) ? target : u;
      out.dual = s;
      for (std::size_t j = 0; j < zero.size(); ++j) out.dual(zero[j]) = w(static_cast<Index>(j));
      out.optimal = true;
      return out;
    }
    VectorXd d = target - u;
    double t_max = 1.0;

    auto derivative_at_zero = [&](const VectorXd& dir) {
      ad.noalias() = a * dir;
      double deriv = xi * u.dot(dir) - b.dot(dir);
      for (Index i = 0; i < n; ++i) deriv += s(i) != 0.0 ? s(i) * ad(i) : std::abs(ad(i));
      return deriv;
    };
    double deriv = derivative_at_zero(d);
    if (!(deriv < 0.0) || d.norm() <= 1e-15 * std::max(u_norm, 1.0)) {
      d = -g;
      t_max = std::numeric_limits<double>::infinity();
      deriv = derivative_at_zero(d);
      if (!(deriv < 0.0)) return out;
    }

    // Exact line search on the convex piecewise quadratic t -> phi(u + t d).
    const double slope = xi * d.squaredNorm();
    events.clear();
    for (Index i = 0; i < n; ++i) {
      if (s(i) == 0.0 || s(i) * ad(i) >= 0.0) continue;
      const double t = -r(i) / ad(i);
      if (t > 0.0 && t < t_max) events.emplace_back(t, 2.0 * std::abs(ad(i)));
    }
    std::sort(events.begin(), events.end());
    double t = 0.0;
    double step = -1.0;
    for (const auto& [te, jump] : events) {
      const double at_event = deriv + slope * (te - t);
      if (at_event >= 0.0) {
        step = t - deriv / slope;
        break;
      }
      deriv = at_event + jump;
      t = te;
      if (deriv >= 0.0) {
        step = te;
        break;
      }
    }
    if (step < 0.0) step = std::min(t - deriv / slope, t_max);
    if (!(step > 0.0) || !std::isfinite(step)) return out;
    u += step * d;
  }
  out.u = u;
  return out;
}

MatrixXd merge_parallel_rows(const MatrixXd& rows) {
  const Index p = rows.cols();
  std::map<std::vector<long long>, Index> groups;
  std::vector<VectorXd> directions;
  std::vector<double> weights;
  for (Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm == 0.0) continue;
    VectorXd e = rows.row(i).transpose() / norm;
    for (Index k = 0; k < p; ++k) {
      if (std::abs(e(k)) > 1e-6) {
        if (e(k) < 0.0) e = -e;
        break;
      }
    }
    std::vector<long long> key(static_cast<std::size_t>(p));
    for (Index k = 0; k < p; ++k) key[static_cast<std::size_t>(k)] = std::llround(e(k) * 1e10);
    const auto [it, inserted] = groups.emplace(std::move(key), static_cast<Index>(directions.size()));
    if (inserted) {
      directions.push_back(e);
      weights.push_back(norm);
    } else {
      weights[static_cast<std::size_t>(it->second)] += norm;
    }
  }
  MatrixXd out(static_cast<Index>(directions.size()), p);
  for (std::size_t j = 0; j < directions.size(); ++j) {
    out.row(static_cast<Index>(j)) = weights[j] * directions[j].transpose();
  }
  return out;
}

AdmmResult admm_subproblem(const MatrixXd& m_plus, double xi, const VectorXd& y_k,
                           const SolverConfig& cfg, const AdmmState& warm) {
  const AdmmSubproblem sub(m_plus, xi, cfg.rho);
  return sub.solve(y_k, cfg.eps_abs, cfg.eps_rel, cfg.max_admm_iters, warm);
}

DcaResult dca_solve(const SignedDiffProblem& problem, double xi, double psi, const VectorXd& u0,
                    const SolverConfig& cfg, const AdmmState& warm) {
  if (!(xi - psi > 0.0)) {
    throw ConvexityViolation("xi - psi = " + std::to_string(xi - psi) + " is not positive");
  }
  if (u0.size() != problem.dim()) {
    throw DimensionMismatch("initial point has length " + std::to_string(u0.size()) +
                            ", expected " + std::to_string(problem.dim()));
  }
  if (!u0.allFinite()) throw NumericalFailure("initial DCA point is not finite");

  const AdmmSubproblem sub(problem.m_plus, xi, cfg.rho);

  DcaResult out;
  out.trace.xi = xi;
  out.trace.psi = psi;
  out.trace.rho = cfg.rho;
  out.state = warm;

  VectorXd u = u0;
  double lagrangian = augmented_lagrangian(problem, u, xi, psi);
  out.trace.lagrangian.push_back(lagrangian);

  for (int k = 0; k < cfg.max_dca_iters; ++k) {
    const VectorXd y = subgradient_h(u, problem.m_minus, xi, psi);

    // The descent inequality L(u_k) - L(u_{k+1}) >= xi/2 ||du||^2 holds for the
    // exact subproblem minimizer; tighten the inner tolerances until the inexact
    // ADMM iterate satisfies it as well.
    double eps_abs = cfg.eps_abs;
    double eps_rel = cfg.eps_rel;
    AdmmResult inner;
    double next_lagrangian = 0.0;
    double step_sq = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
      inner = sub.solve(y, eps_abs, eps_rel, cfg.max_admm_iters, out.state);
      out.trace.admm_iterations += inner.iterations;
      if (cfg.polish && sub.polish(y, inner)) ++out.trace.polished;
      out.state = inner.state;
      if (!inner.u.allFinite()) throw NumericalFailure("DCA iterate is not finite");
      next_lagrangian = augmented_lagrangian(problem, inner.u, xi, psi);
      step_sq = (inner.u - u).squaredNorm();
      const double slack = 1e-11 * std::max(1.0, std::abs(lagrangian));
      if (lagrangian - next_lagrangian >= 0.5 * xi * step_sq - slack) break;
      eps_abs *= 1e-2;
      eps_rel *= 1e-2;
    }
    if (!inner.converged) ++out.trace.admm_unconverged;

    const VectorXd delta = inner.u - u;
    double max_rel = 0.0;
    for (Index i = 0; i < u.size(); ++i) {
      max_rel = std::max(max_rel, std::abs(delta(i)) / std::max(std::abs(u(i)), 1e-12));
    }
    const double norm_rel = delta.norm() / std::max(u.norm(), 1e-12);

    u = inner.u;
    lagrangian = next_lagrangian;
    out.trace.lagrangian.push_back(lagrangian);
    out.trace.step_sq.push_back(step_sq);

    if (max_rel < cfg.dca_tol || norm_rel < cfg.dca_tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.u = std::move(u);
  return out;
}

VectorXd sign_normalized(const VectorXd& u) {
  const double cutoff = 1e-12 * u.norm();
  for (Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > cutoff) return u(i) < 0.0 ? VectorXd(-u) : u;
  }
  return u;
}

SignedDiffProblem scaled_problem(const SignedDiffProblem& problem, double scale) {
  SignedDiffProblem out;
  out.n_samples = problem.n_samples;
  out.m_plus = problem.m_plus / scale;
  out.m_minus = problem.m_minus / scale;
  return out;
}

double problem_scale(const SignedDiffProblem& problem) {
  // Twice the largest objective value over the coordinate axes and the
  // diagonal; with xi0 = 1 this keeps the unconstrained minimizer's radius
  // 1 - f/xi comfortably positive.
  const Index p = problem.dim();
  double largest = 0.0;
  VectorXd e = VectorXd::Zero(p);
  for (Index j = 0; j < p; ++j) {
    e.setZero();
    e(j) = 1.0;
    largest = std::max(largest, std::abs(objective(problem, e)));
  }
  e.setConstant(1.0 / std::sqrt(static_cast<double>(p)));
  largest = std::max(largest, std::abs(objective(problem, e)));
  if (largest > 0.0) return 2.0 * largest;

  double total = 0.0;
  if (problem.n_plus() > 0) total += problem.m_plus.rowwise().norm().sum();
  if (problem.n_minus() > 0) total += problem.m_minus.rowwise().norm().sum();
  return total > 0.0 ? total : 1.0;
}

namespace {

double adaptive_rho(const SolverConfig& cfg, double xi, double lambda_min, double lambda_max) {
  if (!cfg.adaptive_rho || lambda_max <= 0.0) return cfg.rho;
  const double floor = 1e-8 * lambda_max;
  return cfg.rho * xi / std::sqrt(lambda_max * std::max(lambda_min, floor));
}

VectorXd random_unit(Index p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd u(p);
  do {
    for (Index i = 0; i < p; ++i) u(i) = normal(gen);
  } while (u.norm() == 0.0);
  return u / u.norm();
}

struct RestartOutcome {
  bool usable = false;
  bool converged = false;
  VectorXd raw_u;
  double xi = 0.0;
  double psi = 0.0;
  std::vector<DcaTrace> runs;
};

RestartOutcome run_restart(const SignedDiffProblem& work, const SolverConfig& cfg,
                           const VectorXd& u0, double lambda_min, double lambda_max) {
  RestartOutcome out;
  double xi = cfg.xi0;
  double psi = cfg.psi0;
  VectorXd u = u0;
  AdmmState state;

  for (int t = 0; t < cfg.max_outer_iters; ++t) {
    while (!(xi - psi > 0.0)) xi *= cfg.xi_growth;
    SolverConfig inner_cfg = cfg;
    inner_cfg.rho = adaptive_rho(cfg, xi, lambda_min, lambda_max);

    DcaResult dca = dca_solve(work, xi, psi, u, inner_cfg, state);
    state = std::move(dca.state);
    u = dca.u;
    out.runs.push_back(std::move(dca.trace));

    const double radius = u.norm();
    out.raw_u = u;
    out.xi = xi;
    out.psi = psi;
    if (radius == 0.0) return out;  // u* = 0 is not a usable limit
    out.usable = true;

    psi += xi * (radius - 1.0);
    if (std::abs(radius - 1.0) < cfg.outer_tol && out.runs.back().converged) {
      out.converged = true;
      break;
    }
    xi = std::min(xi * cfg.xi_growth, cfg.xi_max);
  }
  return out;
}

}  // namespace

DirectionResult solve_min_direction(const SignedDiffProblem& problem, const SolverConfig& cfg) {
  cfg.validate();
  const Index p = problem.dim();
  if (p < 1) throw InvalidParameter("direction search needs dimension >= 1");
  const double n = static_cast<double>(problem.n_samples);

  DirectionResult result;
  result.statistic = std::numeric_limits<double>::quiet_NaN();

  auto finish = [&](VectorXd u) {
    result.u = sign_normalized(u / u.norm());
    result.objective_value = objective(problem, result.u);
    result.v2n = n > 0.0 ? 2.0 * result.objective_value / (n * n) : 0.0;
    return result;
  };

  if (p == 1) {
    result.converged = true;
    result.restarts_used = 1;
    result.best_restart = 0;
    result.raw_u = VectorXd::Ones(1);
    return finish(VectorXd::Ones(1));
  }
  if (problem.empty()) {
    // Flat objective: every unit vector attains 0.
    result.converged = true;
    result.restarts_used = 1;
    result.best_restart = 0;
    result.raw_u = VectorXd::Unit(p, 0);
    return finish(VectorXd::Unit(p, 0));
  }

  result.scale = problem_scale(problem);
  SignedDiffProblem work = scaled_problem(problem, result.scale);
  work.m_plus = merge_parallel_rows(work.m_plus);
  work.m_minus = merge_parallel_rows(work.m_minus);

  double lambda_min = 0.0;
  double lambda_max = 0.0;
  if (work.n_plus() > 0) {
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(work.m_plus.transpose() * work.m_plus,
                                                      Eigen::EigenvaluesOnly);
    lambda_min = std::max(eig.eigenvalues().minCoeff(), 0.0);
    lambda_max = eig.eigenvalues().maxCoeff();
  }

  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_trace;
  std::string last_error = "no restart produced a nonzero direction";
  for (int r = 0; r < cfg.n_restarts; ++r) {
    const VectorXd u0 = random_unit(p, derive_seed(cfg.seed, {0x5245u, static_cast<std::uint64_t>(r)}));
    RestartOutcome outcome;
    try {
      outcome = run_restart(work, cfg, u0, lambda_min, lambda_max);
    } catch (const NumericalFailure& e) {
      last_error = e.what();
      continue;
    }
    for (auto& run : outcome.runs) result.dca_runs.push_back(run);
    if (!outcome.usable) continue;
    ++result.restarts_used;

    const VectorXd unit = outcome.raw_u / outcome.raw_u.norm();
    const double value = objective(problem, unit);
    if (value < best_value) {
      best_value = value;
      result.best_restart = r;
      result.converged = outcome.converged;
      result.raw_u = outcome.raw_u;
      result.final_xi = outcome.xi;
      result.final_psi = outcome.psi;
      best_trace.clear();
      for (const auto& run : outcome.runs) {
        best_trace.insert(best_trace.end(), run.lagrangian.begin(), run.lagrangian.end());
      }
    }
  }
  if (result.best_restart < 0) {
    throw SolverFailure("all " + std::to_string(cfg.n_restarts) +
                        " restarts failed: " + last_error);
  }
  result.lagrangian_trace = std::move(best_trace);
  return finish(result.raw_u);
}

DirectionResult solve_min_direction(const SampleMatrix& x, const SampleMatrix& y,
                                    const SolverConfig& cfg) {
  DirectionResult result = solve_min_direction(build_problem(x, y), cfg);
  result.statistic = independence_statistic(empirical_dcov(x.project(result.u), y));
  return result;
}

double stationarity_residual(const SignedDiffProblem& problem, const VectorXd& u, double xi,
                             double psi, double kink_tol) {
  const double norm = u.norm();
  if (norm == 0.0) throw InvalidParameter("stationarity is only defined at nonzero u");

  VectorXd fixed = xi * u - ((xi - psi) / norm) * u;
  std::vector<VectorXd> free_columns;

  auto accumulate = [&](const MatrixXd& m, double sign) {
    if (m.rows() == 0) return;
    const VectorXd mu = m * u;
    for (Index i = 0; i < m.rows(); ++i) {
      const double row_norm = m.row(i).norm();
      if (row_norm == 0.0) continue;
      if (std::abs(mu(i)) <= kink_tol * row_norm * norm) {
        free_columns.emplace_back(m.row(i).transpose());
      } else {
        fixed += sign * (mu(i) > 0.0 ? 1.0 : -1.0) * m.row(i).transpose();
      }
    }
  };
  accumulate(problem.m_plus, 1.0);
  accumulate(problem.m_minus, -1.0);

  MatrixXd cols(u.size(), static_cast<Index>(free_columns.size()));
  for (std::size_t i = 0; i < free_columns.size(); ++i) cols.col(static_cast<Index>(i)) = free_columns[i];
  VectorXd signs;
  return box_least_squares(fixed, cols, signs, 20000).norm();
}

}  // namespace disca
