#include "disca/engine.hpp"

#include <string>

#include "disca/dcov.hpp"
#include "disca/reduction.hpp"
#include "disca/rng.hpp"

namespace disca {

std::string to_string(Decision d) { return d == Decision::kStop ? "stop" : "eliminate"; }

MatrixXd EliminationTrace::eliminated() const {
  const Index d = basis.ambient_dim();
  MatrixXd out(d, 0);
  for (const auto& rec : records) {
    if (rec.decision != Decision::kEliminate) continue;
    out.conservativeResize(d, out.cols() + 1);
    out.col(out.cols() - 1) = rec.direction;
  }
  return out;
}

EliminationTrace estimate_subspace(const SampleMatrix& x, const SampleMatrix& y,
                                   const SolverConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  if (x.rows() != y.rows()) {
    throw DimensionMismatch("sample pair has " + std::to_string(x.rows()) + " and " +
                            std::to_string(y.rows()) + " rows");
  }
  const Index p = x.cols();
  const double threshold = rejection_threshold(cfg.alpha);
  const GMatrix g = g_coefficients(y);
  const MatrixXd dist_y = pairwise_distances(y);

  EliminationTrace trace;
  // Orthonormal basis of the complement of the eliminated directions.
  MatrixXd working = MatrixXd::Identity(p, p);

  while (working.cols() > 0) {
    const Index d = working.cols();
    const SampleMatrix reduced(x.data() * working);

    SolverConfig step_cfg = cfg;
    step_cfg.seed = derive_seed(cfg.seed, {stream, static_cast<std::uint64_t>(d)});
    DirectionResult found;
    try {
      found = solve_min_direction(build_signed_diffs(reduced, g), step_cfg);
    } catch (const SolverFailure& e) {
      trace.basis = Basis(working);
      throw EliminationFailure(e.what(), std::move(trace));
    }

    EliminationRecord rec;
    rec.working_dim = d;
    rec.direction = working * found.u;
    rec.objective_value = found.objective_value;
    rec.converged = found.converged;
    rec.restarts_used = found.restarts_used;
    const DistanceStats stats =
        dcov_from_distances(pairwise_distances(reduced.project(found.u)), dist_y);
    rec.v2n = stats.v2n;
    rec.statistic = independence_statistic(stats);
    rec.threshold = threshold;

    if (rec.statistic > threshold) {
      rec.decision = Decision::kStop;
      trace.records.push_back(std::move(rec));
      break;
    }
    rec.decision = Decision::kEliminate;
    trace.records.push_back(std::move(rec));

    if (d == 1) {
      working.resize(p, 0);
    } else {
      // Shrink the working space by the accepted direction, within its own coordinates.
      const Basis within = complement(Basis(found.u));
      working = working * within.columns();
    }
  }
  for (Index k = 0; k < working.cols(); ++k) working.col(k) = sign_normalized(working.col(k));
  trace.basis = Basis(working);
  return trace;
}

DiscaOutput disca(const SampleMatrix& x, const SampleMatrix& y, const SolverConfig& cfg) {
  DiscaOutput out;
  out.config = cfg;
  out.trace_x = estimate_subspace(x, y, cfg, 1);
  out.basis_x = out.trace_x.basis;

  const SampleMatrix x_reduced = out.basis_x.rank() > 0 ? project_samples(x, out.basis_x)
                                                        : SampleMatrix::constant(x.rows());
  out.trace_y = estimate_subspace(y, x_reduced, cfg, 2);
  out.basis_y = out.trace_y.basis;
  return out;
}

}  // namespace disca
