#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "d2dcoex/allocation.hpp"
#include "d2dcoex/errors.hpp"

namespace d2dcoex {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SparseRow {
  int source = 0;  // index into the CU constraint list
  std::vector<int> idx;
  std::vector<double> val;

  double dot(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (std::size_t q = 0; q < idx.size(); ++q) s += val[q] * x(idx[q]);
    return s;
  }
};

// Scaled problem in x = P / Pmax over the free variables:
//   max sum log(1 + b x)  s.t.  A x <= 1,  sum_{m} x_jm <= 1,  x >= 0.
struct Scaled {
  int pairs = 0;
  int per_pair = 0;
  std::vector<int> var_of;       // free-variable index -> flat (j*S + m)
  std::vector<int> pair_of;      // free-variable index -> pair
  std::vector<std::vector<int>> vars_of_pair;
  Eigen::VectorXd b;
  std::vector<SparseRow> rows;
};

// phi(x + alpha dx) - phi(x), summed from per-term log ratios so that it stays
// accurate when phi itself is large. +inf outside the domain.
double barrier_change(const Scaled& sp, const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double alpha,
                      double t) {
  double d = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double r = alpha * dx(k) / x(k);
    if (!(r > -1.0)) return kInf;
    d += -t * std::log1p(sp.b(k) * alpha * dx(k) / (1.0 + sp.b(k) * x(k))) - std::log1p(r);
  }
  for (const auto& row : sp.rows) {
    const double r = -alpha * row.dot(dx) / (1.0 - row.dot(x));
    if (!(r > -1.0)) return kInf;
    d -= std::log1p(r);
  }
  for (const auto& vars : sp.vars_of_pair) {
    if (vars.empty()) continue;
    double u = 1.0, du = 0.0;
    for (int k : vars) { u -= x(k); du += dx(k); }
    const double r = -alpha * du / u;
    if (!(r > -1.0)) return kInf;
    d -= std::log1p(r);
  }
  return d;
}

struct NewtonState {
  Eigen::VectorXd grad;
  Eigen::VectorXd step;
  double decrement2 = 0.0;
};

// Newton direction of the barrier function. The Hessian is
//   diag(D) + sum_j w_j 1_j 1_j^T + sum_i z_i a_i a_i^T,
// handled as a block-diagonal part (diag + rank one per pair, inverted with
// Sherman-Morrison) plus a low-rank CU part (Woodbury).
NewtonState newton_direction(const Scaled& sp, const Eigen::VectorXd& x, double t) {
  const Eigen::Index n = x.size();
  const auto k_rows = static_cast<Eigen::Index>(sp.rows.size());
  NewtonState st;
  st.grad.resize(n);
  Eigen::VectorXd dinv(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double q = 1.0 + sp.b(k) * x(k);
    st.grad(k) = -t * sp.b(k) / q - 1.0 / x(k);
    dinv(k) = 1.0 / (t * sp.b(k) * sp.b(k) / (q * q) + 1.0 / (x(k) * x(k)));
  }
  std::vector<double> cap_w(sp.vars_of_pair.size(), 0.0), cap_den(sp.vars_of_pair.size(), 1.0);
  for (std::size_t j = 0; j < sp.vars_of_pair.size(); ++j) {
    const auto& vars = sp.vars_of_pair[j];
    if (vars.empty()) continue;
    double u = 1.0, dsum = 0.0;
    for (int k : vars) { u -= x(k); dsum += dinv(k); }
    for (int k : vars) st.grad(k) += 1.0 / u;
    cap_w[j] = 1.0 / (u * u);
    cap_den[j] = 1.0 + cap_w[j] * dsum;
  }
  std::vector<double> row_scale(sp.rows.size());
  for (std::size_t i = 0; i < sp.rows.size(); ++i) {
    const double s = 1.0 - sp.rows[i].dot(x);
    row_scale[i] = 1.0 / s;
    for (std::size_t q = 0; q < sp.rows[i].idx.size(); ++q) st.grad(sp.rows[i].idx[q]) += sp.rows[i].val[q] / s;
  }

  auto apply_block_inverse = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out = dinv.cwiseProduct(v);
    for (std::size_t j = 0; j < sp.vars_of_pair.size(); ++j) {
      const auto& vars = sp.vars_of_pair[j];
      if (vars.empty()) continue;
      double proj = 0.0;
      for (int k : vars) proj += out(k);
      const double c = cap_w[j] * proj / cap_den[j];
      for (int k : vars) out(k) -= c * dinv(k);
    }
    return out;
  };

  Eigen::VectorXd bg = apply_block_inverse(st.grad);
  if (k_rows > 0) {
    Eigen::MatrixXd y(n, k_rows);
    for (Eigen::Index i = 0; i < k_rows; ++i) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
      const auto& row = sp.rows[static_cast<std::size_t>(i)];
      for (std::size_t q = 0; q < row.idx.size(); ++q) a(row.idx[q]) = row.val[q] * row_scale[static_cast<std::size_t>(i)];
      y.col(i) = apply_block_inverse(a);
    }
    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(k_rows, k_rows);
    Eigen::VectorXd rhs(k_rows);
    for (Eigen::Index i = 0; i < k_rows; ++i) {
      const auto& row = sp.rows[static_cast<std::size_t>(i)];
      const double sc = row_scale[static_cast<std::size_t>(i)];
      rhs(i) = sc * row.dot(bg);
      for (Eigen::Index l = 0; l < k_rows; ++l) {
        double s = 0.0;
        for (std::size_t q = 0; q < row.idx.size(); ++q) s += row.val[q] * y(row.idx[q], l);
        gram(i, l) += sc * s;
      }
    }
    gram = 0.5 * (gram + gram.transpose());
    const Eigen::VectorXd coef = gram.ldlt().solve(rhs);
    bg -= y * coef;
  }
  st.step = -bg;
  st.decrement2 = -st.grad.dot(st.step);
  return st;
}

double max_feasible_step(const Scaled& sp, const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double alpha = kInf;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (dx(k) < 0.0) alpha = std::min(alpha, -x(k) / dx(k));
  for (const auto& row : sp.rows) {
    const double ad = row.dot(dx);
    if (ad > 0.0) alpha = std::min(alpha, (1.0 - row.dot(x)) / ad);
  }
  for (const auto& vars : sp.vars_of_pair) {
    double u = 1.0, du = 0.0;
    for (int k : vars) { u -= x(k); du += dx(k); }
    if (du > 0.0) alpha = std::min(alpha, u / du);
  }
  return alpha;
}

// Water-fill of sum log(1 + b x) over x >= 0, sum x <= 1: x = max(0, 1/mu - 1/b)
// with the level found by bisection on mu. Returns mu.
double water_fill(const std::vector<double>& b, std::vector<double>& x) {
  x.resize(b.size());
  auto fill = [&](double mu) {
    double total = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) total += x[k] = std::max(0.0, 1.0 / mu - 1.0 / b[k]);
    return total;
  };
  double lo = 0.0, hi = *std::max_element(b.begin(), b.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (fill(mid) > 1.0 ? lo : hi) = mid;
  }
  fill(hi);
  return hi;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::InfeasibleSkipped: return "infeasible_skipped";
  }
  return "unknown";
}

bool CuConstraints::feasible() const { return (threshold.array() >= 0.0).all(); }

CuConstraints cu_constraint_coefficients(const SinrInputs& in, const Eigen::VectorXd& p_cu, double sinr_min_linear) {
  if (!in.map.rb_of_d2d) throw Error("CU constraints need an RB assignment");
  const int s = in.subcarriers_per_rb();
  const int num_cus = static_cast<int>(in.map.rb_of_cu.size());
  const int num_pairs = static_cast<int>(in.map.rb_of_d2d->size());
  const double p0 = in.d2d_to_cu.reference_power();
  CuConstraints c;
  c.coeff = Eigen::MatrixXd::Zero(num_cus, num_pairs * s);
  c.threshold.resize(num_cus);
  for (int i = 0; i < num_cus; ++i) {
    const int rx0 = in.map.first_subcarrier(in.map.rb_of_cu[i]);
    for (int j = 0; j < num_pairs; ++j) {
      const int tx0 = in.map.first_subcarrier((*in.map.rb_of_d2d)[j]);
      for (int m = 0; m < s; ++m) {
        double leak = 0.0;
        for (int k = 0; k < s; ++k) leak += in.d2d_to_cu((rx0 + k) - (tx0 + m));
        c.coeff(i, j * s + m) = in.gains.h_d2d_bs(j) * leak / p0;
      }
    }
    c.threshold(i) = sinr_min_linear > 0.0 ? p_cu(i) * in.gains.h_cu_bs(i) / sinr_min_linear - in.noise_per_rb() : kInf;
  }
  return c;
}

PowerLoadingProblem make_power_loading_problem(const SinrInputs& in, const Eigen::VectorXd& p_cu, double max_power,
                                               double sinr_min_linear) {
  const int s = in.subcarriers_per_rb();
  const int num_pairs = static_cast<int>(in.map.rb_of_d2d->size());
  PowerAllocation cu_only{Eigen::MatrixXd::Zero(num_pairs, s), p_cu};
  PowerLoadingProblem pr;
  pr.gain_to_noise.resize(num_pairs, s);
  for (int j = 0; j < num_pairs; ++j)
    for (int m = 0; m < s; ++m)
      pr.gain_to_noise(j, m) = in.gains.h_self(j) / (in.noise_per_subcarrier + i_cu_at_d2d(in, cu_only, j, m));
  CuConstraints c = cu_constraint_coefficients(in, p_cu, sinr_min_linear);
  pr.cu_coeff = std::move(c.coeff);
  pr.cu_threshold = std::move(c.threshold);
  pr.max_power = max_power;
  return pr;
}

double predicted_objective(const PowerLoadingProblem& problem, const Eigen::MatrixXd& powers) {
  return (problem.gain_to_noise.array() * powers.array()).log1p().sum();
}

PowerLoadingResult solve_power_loading(const PowerLoadingProblem& pr, const PowerLoadingOptions& options) {
  const int num_pairs = static_cast<int>(pr.gain_to_noise.rows());
  const int s = static_cast<int>(pr.gain_to_noise.cols());
  const int num_cus = static_cast<int>(pr.cu_threshold.size());
  if (pr.cu_coeff.rows() != num_cus || pr.cu_coeff.cols() != num_pairs * s)
    throw Error("power loading: constraint matrix has the wrong shape");
  if (!(pr.max_power > 0.0)) throw Error("power loading: max_power must be positive");

  PowerLoadingResult res;
  res.powers = Eigen::MatrixXd::Zero(num_pairs, s);
  res.dual_cu = Eigen::VectorXd::Zero(num_cus);
  res.dual_cap = Eigen::VectorXd::Zero(num_pairs);
  if ((pr.cu_threshold.array() < 0.0).any()) {
    res.status = SolveStatus::InfeasibleSkipped;
    return res;
  }

  // Variables coupled to a CU with zero headroom are pinned at zero.
  std::vector<char> pinned(num_pairs * s, 0);
  for (int k = 0; k < num_pairs * s; ++k)
    if (!(pr.gain_to_noise(k / s, k % s) > 0.0)) pinned[k] = 1;
  for (int i = 0; i < num_cus; ++i)
    if (pr.cu_threshold(i) == 0.0)
      for (int k = 0; k < num_pairs * s; ++k)
        if (pr.cu_coeff(i, k) > 0.0) pinned[k] = 1;

  Scaled sp;
  sp.pairs = num_pairs;
  sp.per_pair = s;
  sp.vars_of_pair.resize(num_pairs);
  std::vector<int> free_of(num_pairs * s, -1);
  for (int k = 0; k < num_pairs * s; ++k) {
    if (pinned[k]) continue;
    free_of[k] = static_cast<int>(sp.var_of.size());
    sp.vars_of_pair[k / s].push_back(free_of[k]);
    sp.var_of.push_back(k);
    sp.pair_of.push_back(k / s);
  }
  const auto n = static_cast<Eigen::Index>(sp.var_of.size());
  if (n == 0) return res;
  sp.b.resize(n);
  for (Eigen::Index q = 0; q < n; ++q) sp.b(q) = pr.gain_to_noise(sp.var_of[q] / s, sp.var_of[q] % s) * pr.max_power;

  for (int i = 0; i < num_cus; ++i) {
    const double thr = pr.cu_threshold(i);
    if (!(thr > 0.0) || std::isinf(thr)) continue;
    SparseRow row;
    row.source = i;
    std::vector<double> worst(num_pairs, 0.0);
    for (Eigen::Index q = 0; q < n; ++q) {
      const double a = pr.cu_coeff(i, sp.var_of[q]) * pr.max_power / thr;
      if (a == 0.0) continue;
      row.idx.push_back(static_cast<int>(q));
      row.val.push_back(a);
      worst[sp.pair_of[q]] = std::max(worst[sp.pair_of[q]], a);
    }
    double reach = 0.0;
    for (double w : worst) reach += w;
    if (reach <= 1.0) continue;  // cannot bind under the power caps
    sp.rows.push_back(std::move(row));
  }

  // Strictly feasible start: equal split at half the cap, shrunk below every CU row.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 0.5 / s);
  double worst_row = 0.0;
  for (const auto& row : sp.rows) worst_row = std::max(worst_row, row.dot(x));
  if (worst_row > 0.5) x *= 0.5 / worst_row;

  const double num_constraints = static_cast<double>(n + static_cast<Eigen::Index>(sp.rows.size()) + num_pairs);
  constexpr double kGrowth = 20.0;
  constexpr double kCentering = 1e-14;
  constexpr int kMaxCenteringSteps = 60;
  double t = 1.0;
  int newton_steps = 0;
  bool converged = false;

  for (;;) {
    for (int k = 0; k < kMaxCenteringSteps && newton_steps < options.max_iterations; ++k) {
      const NewtonState st = newton_direction(sp, x, t);
      if (!(st.decrement2 >= 0.0) || !st.step.allFinite()) break;
      if (st.decrement2 * 0.5 <= kCentering) break;
      ++newton_steps;
      double alpha = std::min(1.0, 0.99 * max_feasible_step(sp, x, st.step));
      const double slope = -st.decrement2;
      bool accepted = false;
      for (int ls = 0; ls < 60 && !accepted; ++ls) {
        if (barrier_change(sp, x, st.step, alpha, t) <= 0.25 * alpha * slope) accepted = true;
        else alpha *= 0.5;
      }
      if (!accepted) break;
      x += alpha * st.step;
    }
    const double f = (sp.b.array() * x.array()).log1p().sum();
    const double target = 0.1 * options.kkt_tolerance;
    if (num_constraints / t <= target * std::max(1.0, std::abs(f)) && 1.0 / t <= target) {
      converged = true;
      break;
    }
    if (newton_steps >= options.max_iterations) break;
    t *= kGrowth;
  }

  // Multipliers from the central path: lambda_i s_i = mu_j u_j = nu_k x_k = 1/t.
  const auto num_rows = static_cast<Eigen::Index>(sp.rows.size());
  Eigen::VectorXd lam(num_rows);
  Eigen::VectorXd price = Eigen::VectorXd::Zero(n);
  std::vector<char> coupled(num_pairs, 0);
  for (Eigen::Index i = 0; i < num_rows; ++i) {
    const auto& row = sp.rows[static_cast<std::size_t>(i)];
    lam(i) = 1.0 / (t * (1.0 - row.dot(x)));
    for (std::size_t q = 0; q < row.idx.size(); ++q) {
      price(row.idx[q]) += lam(i) * row.val[q];
      coupled[sp.pair_of[row.idx[q]]] = 1;
    }
    res.dual_cu(row.source) = lam(i) / pr.cu_threshold(row.source);
  }
  Eigen::VectorXd mu(num_pairs);
  for (int j = 0; j < num_pairs; ++j) {
    double u = 1.0;
    for (int k : sp.vars_of_pair[j]) u -= x(k);
    mu(j) = 1.0 / (t * u);
  }

  // Pairs outside every CU row only face their cap: solve that water-fill exactly.
  if (converged) {
    for (int j = 0; j < num_pairs; ++j) {
      const auto& vars = sp.vars_of_pair[j];
      if (vars.empty() || coupled[j]) continue;
      std::vector<double> b, xs;
      for (int k : vars) b.push_back(sp.b(k));
      mu(j) = water_fill(b, xs);
      for (std::size_t q = 0; q < vars.size(); ++q) x(vars[q]) = xs[q];
    }
  }

  // Stationarity with the best nonnegative multiplier of x >= 0, plus that
  // multiplier's complementarity product.
  Eigen::VectorXd resid(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    const double g = sp.b(q) / (1.0 + sp.b(q) * x(q)) - price(q) - mu(sp.pair_of[q]);
    const double nu = std::max(0.0, -g);
    resid(q) = std::max(g + nu, nu * x(q));
  }
  for (int j = 0; j < num_pairs; ++j)
    if (!sp.vars_of_pair[j].empty()) res.dual_cap(j) = mu(j) / pr.max_power;
  double grad_scale = 1.0;
  for (Eigen::Index q = 0; q < n; ++q) grad_scale = std::max(grad_scale, sp.b(q) / (1.0 + sp.b(q) * x(q)));

  for (Eigen::Index q = 0; q < n; ++q) res.powers(sp.var_of[q] / s, sp.var_of[q] % s) = x(q) * pr.max_power;
  res.objective = predicted_objective(pr, res.powers);
  res.iterations_used = newton_steps;
  const double gap = num_constraints / t / std::max(1.0, std::abs(res.objective));
  res.kkt_residual = std::max(gap, resid.cwiseAbs().maxCoeff() / grad_scale);
  res.status = (converged && res.kkt_residual < options.kkt_tolerance) ? SolveStatus::Optimal : SolveStatus::MaxIter;
  return res;
}

PowerLoadingResult power_loading(const SinrInputs& in, const Eigen::VectorXd& p_cu, double max_power,
                                 double sinr_min_linear, const PowerLoadingOptions& options) {
  return solve_power_loading(make_power_loading_problem(in, p_cu, max_power, sinr_min_linear), options);
}

// --- JSON fixtures ---------------------------------------------------------

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v(i))) out.push_back(nullptr);  // unconstrained
    else out.push_back(v(i));
  }
  return out;
}

Eigen::MatrixXd matrix_from(const json& j, Eigen::Index cols_if_empty = 0) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) throw ValidationError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].is_null() ? kInf : j[i].get<double>();
  return v;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("<json>", 1, static_cast<int>(e.byte), e.what());
  }
}

template <typename F>
auto decode(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const PowerLoadingProblem& p) {
  json j;
  j["gain_to_noise"] = matrix_json(p.gain_to_noise);
  j["cu_coeff"] = matrix_json(p.cu_coeff);
  j["cu_threshold"] = vector_json(p.cu_threshold);
  j["max_power"] = p.max_power;
  return j.dump(1);
}

std::string to_json(const PowerLoadingResult& r) {
  json j;
  j["powers"] = matrix_json(r.powers);
  j["dual_cu"] = vector_json(r.dual_cu);
  j["dual_cap"] = vector_json(r.dual_cap);
  j["objective"] = r.objective;
  j["kkt_residual"] = r.kkt_residual;
  j["iterations_used"] = r.iterations_used;
  j["status"] = to_string(r.status);
  return j.dump(1);
}

std::string to_json(const Assignment& a) {
  json j;
  j["rb_of_pair"] = a.rb_of_pair;
  return j.dump();
}

PowerLoadingProblem power_loading_problem_from_json(const std::string& text) {
  const json j = parse_json(text);
  return decode("power loading problem", [&] {
    PowerLoadingProblem p;
    p.gain_to_noise = matrix_from(j.at("gain_to_noise"));
    p.cu_coeff = matrix_from(j.at("cu_coeff"), p.gain_to_noise.size());
    p.cu_threshold = vector_from(j.at("cu_threshold"));
    p.max_power = j.at("max_power").get<double>();
    return p;
  });
}

PowerLoadingResult power_loading_result_from_json(const std::string& text) {
  const json j = parse_json(text);
  return decode("power loading result", [&] {
    PowerLoadingResult r;
    r.powers = matrix_from(j.at("powers"));
    r.dual_cu = vector_from(j.at("dual_cu"));
    r.dual_cap = vector_from(j.at("dual_cap"));
    r.objective = j.at("objective").get<double>();
    r.kkt_residual = j.at("kkt_residual").get<double>();
    r.iterations_used = j.at("iterations_used").get<int>();
    const std::string s = j.at("status").get<std::string>();
    if (s == "optimal") r.status = SolveStatus::Optimal;
    else if (s == "max_iter") r.status = SolveStatus::MaxIter;
    else if (s == "infeasible_skipped") r.status = SolveStatus::InfeasibleSkipped;
    else throw ValidationError("unknown solve status '" + s + "'");
    return r;
  });
}

Assignment assignment_from_json(const std::string& text) {
  const json j = parse_json(text);
  Assignment a = decode("assignment", [&] { return Assignment{j.at("rb_of_pair").get<std::vector<int>>()}; });
  std::vector<int> sorted = a.rb_of_pair;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 0) throw ValidationError("assignment: negative RB index");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("assignment: two pairs share an RB");
  return a;
}

}  // namespace d2dcoex
