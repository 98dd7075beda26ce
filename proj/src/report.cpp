#include "disca/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "disca/errors.hpp"

namespace disca {

using nlohmann::json;

Format parse_format(const std::string& name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  if (name == "text") return Format::kText;
  throw InvalidParameter("unknown format '" + name + "' (json, csv, text)");
}

namespace {

// NaN has no JSON literal; it travels as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ParseError("expected a number, found " + j.dump());
  return j.get<double>();
}

json vector_json(const VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

VectorXd read_vector(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array, found " + j.dump());
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = read_number(j[i]);
  return v;
}

// A basis travels as the list of its column vectors.
json basis_json(const Basis& b) {
  json cols = json::array();
  for (Index k = 0; k < b.rank(); ++k) cols.push_back(vector_json(b.columns().col(k)));
  return cols;
}

Basis read_basis(const json& cols, Index d) {
  if (!cols.is_array()) throw ParseError("basis must be a list of column vectors");
  MatrixXd m(d, static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const VectorXd c = read_vector(cols[k]);
    if (c.size() != d) throw ParseError("basis column has the wrong length");
    m.col(static_cast<Index>(k)) = c;
  }
  return Basis(std::move(m));
}

json trace_json(const EliminationTrace& t) {
  json recs = json::array();
  for (const auto& r : t.records) {
    recs.push_back({{"working_dim", r.working_dim},
                    {"direction", vector_json(r.direction)},
                    {"objective_value", number(r.objective_value)},
                    {"v2n", number(r.v2n)},
                    {"statistic", number(r.statistic)},
                    {"threshold", number(r.threshold)},
                    {"decision", to_string(r.decision)},
                    {"converged", r.converged},
                    {"restarts_used", r.restarts_used}});
  }
  return recs;
}

EliminationTrace read_trace(const json& j, const Basis& basis) {
  EliminationTrace t;
  t.basis = basis;
  for (const auto& r : j) {
    EliminationRecord rec;
    rec.working_dim = r.at("working_dim").get<Index>();
    rec.direction = read_vector(r.at("direction"));
    rec.objective_value = read_number(r.at("objective_value"));
    rec.v2n = read_number(r.at("v2n"));
    rec.statistic = read_number(r.at("statistic"));
    rec.threshold = read_number(r.at("threshold"));
    const std::string d = r.at("decision").get<std::string>();
    if (d != "stop" && d != "eliminate") throw ParseError("unknown decision '" + d + "'");
    rec.decision = d == "stop" ? Decision::kStop : Decision::kEliminate;
    rec.converged = r.at("converged").get<bool>();
    rec.restarts_used = r.at("restarts_used").get<int>();
    t.records.push_back(std::move(rec));
  }
  return t;
}

std::vector<std::string> names_or_default(const std::vector<std::string>& names, Index d,
                                          const std::string& prefix) {
  if (static_cast<Index>(names.size()) == d) return names;
  std::vector<std::string> out;
  for (Index i = 0; i < d; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string full(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string join(const VectorXd& v, const char* sep) {
  std::ostringstream os;
  for (Index i = 0; i < v.size(); ++i) os << (i ? sep : "") << full(v(i));
  return os.str();
}

// Loadings table: one row per variable, one column per basis vector.
void loadings_table(std::ostringstream& os, const std::string& title, const Basis& b,
                    const std::vector<std::string>& names) {
  os << title << " (rank " << b.rank() << " of " << b.ambient_dim() << ")\n";
  if (b.rank() == 0) {
    os << "  (trivial subspace)\n";
    return;
  }
  std::size_t width = 8;
  for (const auto& n : names) width = std::max(width, n.size() + 2);
  os << std::left << std::setw(static_cast<int>(width)) << "";
  for (Index k = 0; k < b.rank(); ++k) {
    os << std::right << std::setw(10) << ("dir" + std::to_string(k + 1));
  }
  os << "\n";
  for (Index i = 0; i < b.ambient_dim(); ++i) {
    os << std::left << std::setw(static_cast<int>(width)) << names[static_cast<std::size_t>(i)];
    for (Index k = 0; k < b.rank(); ++k) os << std::right << std::setw(10) << fixed(b.columns()(i, k), 3);
    os << "\n";
  }
}

void trace_table(std::ostringstream& os, const std::string& side, const EliminationTrace& t) {
  os << side << " elimination\n";
  os << "  step  dim      objective            v2n      statistic  threshold  decision   conv\n";
  int step = 1;
  for (const auto& r : t.records) {
    os << "  " << std::setw(4) << step++ << std::setw(5) << r.working_dim << std::setw(15)
       << fixed(r.objective_value, 6) << std::setw(15) << fixed(r.v2n, 6) << std::setw(15)
       << fixed(r.statistic, 4) << std::setw(11) << fixed(r.threshold, 4) << "  " << std::left
       << std::setw(11) << to_string(r.decision) << std::right << (r.converged ? "yes" : "no") << "\n";
  }
}

}  // namespace

json to_json(const SolverConfig& c) {
  return {{"xi0", c.xi0},
          {"xi_growth", c.xi_growth},
          {"xi_max", c.xi_max},
          {"psi0", c.psi0},
          {"outer_tol", c.outer_tol},
          {"rho", c.rho},
          {"adaptive_rho", c.adaptive_rho},
          {"eps_abs", c.eps_abs},
          {"eps_rel", c.eps_rel},
          {"dca_tol", c.dca_tol},
          {"max_dca_iters", c.max_dca_iters},
          {"max_admm_iters", c.max_admm_iters},
          {"max_outer_iters", c.max_outer_iters},
          {"n_restarts", c.n_restarts},
          {"seed", c.seed},
          {"polish", c.polish},
          {"alpha", c.alpha}};
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  c.xi0 = j.at("xi0").get<double>();
  c.xi_growth = j.at("xi_growth").get<double>();
  c.xi_max = j.at("xi_max").get<double>();
  c.psi0 = j.at("psi0").get<double>();
  c.outer_tol = j.at("outer_tol").get<double>();
  c.rho = j.at("rho").get<double>();
  c.adaptive_rho = j.at("adaptive_rho").get<bool>();
  c.eps_abs = j.at("eps_abs").get<double>();
  c.eps_rel = j.at("eps_rel").get<double>();
  c.dca_tol = j.at("dca_tol").get<double>();
  c.max_dca_iters = j.at("max_dca_iters").get<int>();
  c.max_admm_iters = j.at("max_admm_iters").get<int>();
  c.max_outer_iters = j.at("max_outer_iters").get<int>();
  c.n_restarts = j.at("n_restarts").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.polish = j.at("polish").get<bool>();
  c.alpha = j.at("alpha").get<double>();
  return c;
}

json to_json(const FitReport& r) {
  const DiscaOutput& o = r.output;
  return {{"scenario", r.meta.scenario},
          {"seed", r.meta.seed},
          {"n", r.meta.n},
          {"x_names", r.meta.x_names},
          {"y_names", r.meta.y_names},
          {"varimax", r.meta.varimax},
          {"config", to_json(o.config)},
          {"p", o.basis_x.ambient_dim()},
          {"q", o.basis_y.ambient_dim()},
          {"basis_x", basis_json(o.basis_x)},
          {"basis_y", basis_json(o.basis_y)},
          {"trace_x", trace_json(o.trace_x)},
          {"trace_y", trace_json(o.trace_y)}};
}

FitReport fit_from_json(const json& j) {
  try {
    FitReport r;
    r.meta.scenario = j.at("scenario").get<std::string>();
    r.meta.seed = j.at("seed").get<std::uint64_t>();
    r.meta.n = j.at("n").get<Index>();
    r.meta.x_names = j.at("x_names").get<std::vector<std::string>>();
    r.meta.y_names = j.at("y_names").get<std::vector<std::string>>();
    r.meta.varimax = j.at("varimax").get<bool>();
    r.output.config = config_from_json(j.at("config"));
    r.output.basis_x = read_basis(j.at("basis_x"), j.at("p").get<Index>());
    r.output.basis_y = read_basis(j.at("basis_y"), j.at("q").get<Index>());
    r.output.trace_x = read_trace(j.at("trace_x"), r.output.basis_x);
    r.output.trace_y = read_trace(j.at("trace_y"), r.output.basis_y);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed fit report: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("malformed fit report: ") + e.what());
  }
}

json to_json(const MonteCarloSummary& s) {
  json sizes = json::array();
  for (const auto& z : s.per_size) {
    auto q = [](const Quantiles& v) {
      return json{{"min", number(v.min)}, {"q1", number(v.q1)}, {"median", number(v.median)},
                  {"q3", number(v.q3)}, {"max", number(v.max)}};
    };
    sizes.push_back({{"n", z.n},
                     {"runs", z.runs},
                     {"failures", z.failures},
                     {"rank_hist_x", z.rank_hist_x},
                     {"rank_hist_y", z.rank_hist_y},
                     {"dist_x", q(z.dist_x)},
                     {"dist_y", q(z.dist_y)}});
  }
  json runs = json::array();
  for (const auto& r : s.records) {
    runs.push_back({{"n", r.n},
                    {"run", r.run},
                    {"seed", r.seed},
                    {"failed", r.failed},
                    {"error", r.error},
                    {"rank_x", r.rank_x},
                    {"rank_y", r.rank_y},
                    {"dist_x", number(r.dist_x)},
                    {"dist_y", number(r.dist_y)}});
  }
  return {{"scenario", s.scenario}, {"seed", s.seed}, {"runs", s.runs}, {"sizes", sizes}, {"records", runs}};
}

std::string format_fit(const FitReport& r, Format format) {
  const DiscaOutput& o = r.output;
  if (format == Format::kJson) return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  if (format == Format::kCsv) {
    os << "side,step,working_dim,objective_value,v2n,statistic,threshold,decision,converged,direction\n";
    auto rows = [&](const char* side, const EliminationTrace& t) {
      int step = 1;
      for (const auto& rec : t.records) {
        os << side << "," << step++ << "," << rec.working_dim << "," << full(rec.objective_value) << ","
           << full(rec.v2n) << "," << full(rec.statistic) << "," << full(rec.threshold) << ","
           << to_string(rec.decision) << "," << (rec.converged ? "true" : "false") << ",\""
           << join(rec.direction, ";") << "\"\n";
      }
    };
    rows("x", o.trace_x);
    rows("y", o.trace_y);
    return os.str();
  }
  os << "scenario " << r.meta.scenario << "  n " << r.meta.n << "  seed " << r.meta.seed << "  alpha "
     << o.config.alpha << (r.meta.varimax ? "  (varimax rotated)" : "") << "\n\n";
  loadings_table(os, "W_X", o.basis_x, names_or_default(r.meta.x_names, o.basis_x.ambient_dim(), "x"));
  os << "\n";
  loadings_table(os, "W_Y", o.basis_y, names_or_default(r.meta.y_names, o.basis_y.ambient_dim(), "y"));
  os << "\n";
  trace_table(os, "X", o.trace_x);
  os << "\n";
  trace_table(os, "Y", o.trace_y);
  return os.str();
}

std::string format_monte_carlo(const MonteCarloSummary& s, Format format) {
  if (format == Format::kJson) return to_json(s).dump(2) + "\n";
  std::ostringstream os;
  if (format == Format::kCsv) {
    os << "n,run,seed,failed,rank_x,rank_y,dist_x,dist_y\n";
    for (const auto& r : s.records) {
      os << r.n << "," << r.run << "," << r.seed << "," << (r.failed ? "true" : "false") << "," << r.rank_x
         << "," << r.rank_y << "," << full(r.dist_x) << "," << full(r.dist_y) << "\n";
    }
    return os.str();
  }
  os << "scenario " << s.scenario << "  runs " << s.runs << "  seed " << s.seed << "\n";
  for (const auto& z : s.per_size) {
    os << "\nN = " << z.n << "  failures " << z.failures << "\n";
    auto hist = [&](const char* label, const std::vector<int>& h) {
      os << "  rank " << label << ":";
      for (std::size_t k = 0; k < h.size(); ++k) os << "  " << k << ":" << h[k];
      os << "\n";
    };
    hist("W_X", z.rank_hist_x);
    hist("W_Y", z.rank_hist_y);
    os << "          min       q1   median       q3      max\n";
    auto row = [&](const char* label, const Quantiles& q) {
      os << "  " << label << std::setw(7) << fixed(q.min, 3) << std::setw(9) << fixed(q.q1, 3) << std::setw(9)
         << fixed(q.median, 3) << std::setw(9) << fixed(q.q3, 3) << std::setw(9) << fixed(q.max, 3) << "\n";
    };
    row("d_X", z.dist_x);
    row("d_Y", z.dist_y);
  }
  return os.str();
}

std::string format_dcov(const DistanceStats& st, double statistic, double alpha, Format format) {
  const double threshold = rejection_threshold(alpha);
  const bool reject = statistic > threshold;
  if (format == Format::kJson) {
    return json{{"n", st.n},        {"s1", number(st.s1)},
                {"s2", number(st.s2)}, {"s3", number(st.s3)},
                {"v2n", number(st.v2n)}, {"statistic", number(statistic)},
                {"alpha", alpha},   {"threshold", threshold},
                {"reject", reject}}
               .dump(2) +
           "\n";
  }
  std::ostringstream os;
  if (format == Format::kCsv) {
    os << "n,s1,s2,s3,v2n,statistic,alpha,threshold,reject\n"
       << st.n << "," << full(st.s1) << "," << full(st.s2) << "," << full(st.s3) << "," << full(st.v2n) << ","
       << full(statistic) << "," << full(alpha) << "," << full(threshold) << "," << (reject ? "true" : "false")
       << "\n";
    return os.str();
  }
  os << "N          " << st.n << "\n"
     << "V2_N       " << full(st.v2n) << "\n"
     << "statistic  " << full(statistic) << "\n"
     << "threshold  " << full(threshold) << "  (alpha " << alpha << ")\n"
     << "decision   " << (reject ? "dependent (reject independence)" : "independence not rejected") << "\n";
  return os.str();
}

}  // namespace disca
