#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disca/dc_solver.hpp"
#include "disca/errors.hpp"
#include "disca/subspace.hpp"

namespace disca {

enum class Decision { kEliminate, kStop };

std::string to_string(Decision d);

//! One pass of the backward-elimination loop.
struct EliminationRecord {
  Index working_dim = 0;  //!< dimension of the search space at this step
  VectorXd direction;     //!< least-dependent direction, original coordinates
  double objective_value = 0.0;
  double v2n = 0.0;
  double statistic = 0.0;
  double threshold = 0.0;
  Decision decision = Decision::kEliminate;
  bool converged = true;
  int restarts_used = 0;
};

struct EliminationTrace {
  std::vector<EliminationRecord> records;
  Basis basis = Basis::trivial(1);  //!< estimated dependence subspace

  //! Eliminated directions as columns (ambient_dim x #eliminated).
  MatrixXd eliminated() const;
};

//! The estimated W_X and W_Y with the loops that produced them.
struct DiscaOutput {
  Basis basis_x = Basis::trivial(1);
  Basis basis_y = Basis::trivial(1);
  EliminationTrace trace_x;
  EliminationTrace trace_y;
  SolverConfig config;
};

//! Solver failure raised inside the elimination loop, carrying the records
//! completed before the failure.
class EliminationFailure : public SolverFailure {
 public:
  EliminationFailure(const std::string& what, EliminationTrace partial)
      : SolverFailure(what), partial_(std::move(partial)) {}
  const EliminationTrace& partial() const noexcept { return partial_; }

 private:
  EliminationTrace partial_;
};

//! Backward elimination of directions u of x for which u'X is judged
//! independent of y; the returned basis spans the complement of the
//! eliminated directions. `stream` separates the seed streams of distinct calls.
EliminationTrace estimate_subspace(const SampleMatrix& x, const SampleMatrix& y,
                                   const SolverConfig& cfg, std::uint64_t stream = 0);

//! W_X from (x, y), then W_Y from (y, x projected onto W_X).
DiscaOutput disca(const SampleMatrix& x, const SampleMatrix& y, const SolverConfig& cfg);

}  // namespace disca
