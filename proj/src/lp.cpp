#include "kmpmd/lp.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "kmpmd/errors.hpp"

namespace kmpmd {

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "?";
}

LPModel build_p_prime(const Instance& instance, std::size_t guard) {
  const std::size_t m = instance.m();
  if (m > guard || m > 62) {
    throw GuardExceeded("LP construction guard: m = " + std::to_string(m) + " > " +
                        std::to_string(guard));
  }
  LPModel model;
  const Rational k = instance.k();
  const Rational scale = Rational(1) / (instance.space().gamma() * k * k);
  for (RequestId u = 0; u < m; ++u) {
    for (RequestId v = u + 1; v < m; ++v) {
      model.pairs.emplace_back(u, v);
      model.objective.push_back(scale * instance.opt_cost_edge(u, v));
    }
  }
  const auto kk = static_cast<std::size_t>(instance.k());
  const std::uint64_t full = m == 0 ? 0 : (std::uint64_t{1} << m) - 1;
  for (std::uint64_t s = 1; s < full; ++s) {
    ++model.candidate_constraints;
    const auto sur = static_cast<std::size_t>(__builtin_popcountll(s)) % kk;
    if (sur == 0) {
      ++model.pruned_constraints;
      continue;
    }
    LPConstraint c;
    c.subset = s;
    c.rhs = Rational(sur * (kk - sur));
    for (std::size_t j = 0; j < model.pairs.size(); ++j) {
      const auto [u, v] = model.pairs[j];
      if (((s >> u) ^ (s >> v)) & 1U) c.terms.emplace_back(j, Rational(1));
    }
    model.constraints.push_back(std::move(c));
  }
  model.provenance.push_back("candidate cut constraints: " +
                             std::to_string(model.candidate_constraints));
  model.provenance.push_back("pruned with zero right-hand side: " +
                             std::to_string(model.pruned_constraints));
  return model;
}

namespace {

// Dictionary form: basic[r] = beta[r] + sum_c alpha[r][c] * nonbasic[c];
// objective z = z0 + sum_c zeta[c] * nonbasic[c], maximised.
class Dictionary {
 public:
  Dictionary(std::size_t rows, std::vector<std::size_t> nonbasic)
      : nonbasic_(std::move(nonbasic)),
        basic_(rows),
        beta_(rows),
        alpha_(rows, std::vector<Rational>(nonbasic_.size())),
        zeta_(nonbasic_.size()) {}

  std::size_t rows() const { return basic_.size(); }
  std::size_t cols() const { return nonbasic_.size(); }

  std::vector<std::size_t> nonbasic_;
  std::vector<std::size_t> basic_;
  std::vector<Rational> beta_;
  std::vector<std::vector<Rational>> alpha_;
  Rational z0_;
  std::vector<Rational> zeta_;
  std::size_t pivots_ = 0;

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = Rational(1) / alpha_[r][c];
    auto& row = alpha_[r];
    beta_[r] = -beta_[r] * inv;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (j == c) continue;
      if (!row[j].is_zero()) row[j] = -row[j] * inv;
    }
    row[c] = inv;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || alpha_[i][c].is_zero()) continue;
      substitute(alpha_[i], beta_[i], r, c);
    }
    if (!zeta_[c].is_zero()) substitute(zeta_, z0_, r, c);
    std::swap(basic_[r], nonbasic_[c]);
    ++pivots_;
  }

  // Bland: smallest entering label with positive reduced cost; smallest
  // leaving label among minimum ratios. Returns false when optimal.
  // Sets unbounded when the entering column has no blocking row.
  bool bland_step(bool& unbounded) {
    std::optional<std::size_t> enter;
    for (std::size_t c = 0; c < cols(); ++c) {
      if (zeta_[c] > 0 && (!enter || nonbasic_[c] < nonbasic_[*enter])) enter = c;
    }
    if (!enter) return false;
    std::optional<std::size_t> leave;
    Rational best;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (alpha_[r][*enter] >= 0) continue;
      Rational ratio = beta_[r] / -alpha_[r][*enter];
      if (!leave || ratio < best || (ratio == best && basic_[r] < basic_[*leave])) {
        leave = r;
        best = std::move(ratio);
      }
    }
    if (!leave) {
      unbounded = true;
      return false;
    }
    pivot(*leave, *enter);
    return true;
  }

  void drop_column(std::size_t c) {
    for (auto& row : alpha_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(c));
    zeta_.erase(zeta_.begin() + static_cast<std::ptrdiff_t>(c));
    nonbasic_.erase(nonbasic_.begin() + static_cast<std::ptrdiff_t>(c));
  }

  void drop_row(std::size_t r) {
    alpha_.erase(alpha_.begin() + static_cast<std::ptrdiff_t>(r));
    beta_.erase(beta_.begin() + static_cast<std::ptrdiff_t>(r));
    basic_.erase(basic_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  // target (+const) has coefficient t on column c, whose variable is now
  // expressed by row r; fold row r in.
  void substitute(std::vector<Rational>& target, Rational& constant, std::size_t r, std::size_t c) {
    const Rational t = target[c];
    const auto& row = alpha_[r];
    constant += t * beta_[r];
    for (std::size_t j = 0; j < cols(); ++j) {
      if (j == c) continue;
      if (!row[j].is_zero()) target[j] += t * row[j];
    }
    target[c] = t * row[c];
  }
};

// Identical cut rows (S and its complement give the same row) are solved once.
std::vector<const LPConstraint*> distinct_constraints(const LPModel& model) {
  std::map<std::pair<std::vector<std::pair<std::size_t, Rational>>, Rational>, std::size_t> seen;
  std::vector<const LPConstraint*> out;
  for (const auto& c : model.constraints) {
    auto terms = c.terms;
    std::sort(terms.begin(), terms.end());
    if (seen.emplace(std::make_pair(std::move(terms), c.rhs), out.size()).second) {
      out.push_back(&c);
    }
  }
  return out;
}

}  // namespace

LPSolution simplex_solve(const LPModel& model) {
  const std::size_t n = model.variables();
  const auto rows = distinct_constraints(model);
  const std::size_t R = rows.size();
  const std::size_t aux = n + R;

  std::vector<std::size_t> nonbasic(n + 1);
  for (std::size_t j = 0; j < n; ++j) nonbasic[j] = j;
  nonbasic[n] = aux;
  Dictionary dict(R, nonbasic);
  for (std::size_t r = 0; r < R; ++r) {
    dict.basic_[r] = n + r;
    dict.beta_[r] = -rows[r]->rhs;
    for (const auto& [j, a] : rows[r]->terms) dict.alpha_[r][j] += a;
    dict.alpha_[r][n] = 1;
  }

  LPSolution sol;
  bool unbounded = false;

  // Phase 1: maximise -x0.
  std::optional<std::size_t> worst;
  for (std::size_t r = 0; r < R; ++r) {
    if (dict.beta_[r] < 0 && (!worst || dict.beta_[r] < dict.beta_[*worst])) worst = r;
  }
  if (worst) {
    dict.zeta_[n] = -1;
    dict.pivot(*worst, n);
    while (dict.bland_step(unbounded)) {
    }
    if (unbounded) throw InvariantBreach("auxiliary problem reported unbounded");
    sol.phase1_value = -dict.z0_;
    if (dict.z0_ < 0) {
      sol.status = LPStatus::infeasible;
      sol.pivots = dict.pivots_;
      return sol;
    }
  }
  // Remove x0: pivot it out if basic (degenerate), then drop its column.
  for (std::size_t r = 0; r < dict.rows(); ++r) {
    if (dict.basic_[r] != aux) continue;
    std::optional<std::size_t> col;
    for (std::size_t c = 0; c < dict.cols(); ++c) {
      if (!dict.alpha_[r][c].is_zero() && (!col || dict.nonbasic_[c] < dict.nonbasic_[*col])) col = c;
    }
    if (col) {
      dict.pivot(r, *col);
    } else {
      dict.drop_row(r);
    }
    break;
  }
  for (std::size_t c = 0; c < dict.cols(); ++c) {
    if (dict.nonbasic_[c] == aux) {
      dict.drop_column(c);
      break;
    }
  }

  // Phase 2: maximise -c.x written over the current nonbasic variables.
  dict.z0_ = 0;
  std::fill(dict.zeta_.begin(), dict.zeta_.end(), Rational(0));
  for (std::size_t c = 0; c < dict.cols(); ++c) {
    if (dict.nonbasic_[c] < n) dict.zeta_[c] -= model.objective[dict.nonbasic_[c]];
  }
  for (std::size_t r = 0; r < dict.rows(); ++r) {
    const std::size_t label = dict.basic_[r];
    if (label >= n || model.objective[label].is_zero()) continue;
    const Rational& cost = model.objective[label];
    dict.z0_ -= cost * dict.beta_[r];
    for (std::size_t c = 0; c < dict.cols(); ++c) {
      if (!dict.alpha_[r][c].is_zero()) dict.zeta_[c] -= cost * dict.alpha_[r][c];
    }
  }
  while (dict.bland_step(unbounded)) {
  }
  sol.pivots = dict.pivots_;
  if (unbounded) {
    sol.status = LPStatus::unbounded;
    return sol;
  }
  sol.status = LPStatus::optimal;
  sol.value = -dict.z0_;
  sol.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < dict.rows(); ++r) {
    if (dict.basic_[r] < n) sol.x[dict.basic_[r]] = dict.beta_[r];
  }
  return sol;
}

Rational lp_objective(const LPModel& model, const std::vector<Rational>& x) {
  Rational total = 0;
  for (std::size_t j = 0; j < model.variables(); ++j) total += model.objective[j] * x[j];
  return total;
}

bool lp_feasible(const LPModel& model, const std::vector<Rational>& x) {
  if (x.size() != model.variables()) return false;
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (const auto& c : model.constraints) {
    Rational lhs = 0;
    for (const auto& [j, a] : c.terms) lhs += a * x[j];
    if (lhs < c.rhs) return false;
  }
  return true;
}

std::vector<Rational> pair_indicator(const LPModel& model,
                                     const std::vector<std::vector<RequestId>>& partition) {
  std::map<std::pair<RequestId, RequestId>, std::size_t> index;
  for (std::size_t j = 0; j < model.pairs.size(); ++j) index[model.pairs[j]] = j;
  std::vector<Rational> x(model.variables());
  for (const auto& g : partition) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        x.at(index.at({std::min(g[i], g[j]), std::max(g[i], g[j])})) = 1;
      }
    }
  }
  return x;
}

DualityChain verify_duality_chain(const Rational& dual, const Rational& primal, const Rational& opt) {
  DualityChain chain{dual, primal, opt};
  chain.dual_le_primal = dual <= primal;
  chain.primal_le_opt = primal <= opt;
  return chain;
}

std::string dump_model(const LPModel& model) {
  std::ostringstream out;
  out << "variables " << model.variables() << "\n";
  for (std::size_t j = 0; j < model.variables(); ++j) {
    out << "x" << j << " (" << model.pairs[j].first << "," << model.pairs[j].second
        << ") cost " << model.objective[j] << "\n";
  }
  out << "constraints " << model.constraints.size() << "\n";
  for (const auto& c : model.constraints) {
    out << "S=" << c.subset << ":";
    for (const auto& [j, a] : c.terms) {
      out << " +";
      if (a != 1) out << a << "*";
      out << "x" << j;
    }
    out << " >= " << c.rhs << "\n";
  }
  for (const auto& line : model.provenance) out << "# " << line << "\n";
  return out.str();
}

std::string dump_solution(const LPModel& model, const LPSolution& solution) {
  std::ostringstream out;
  out << "status " << to_string(solution.status) << "\n";
  out << "phase1 " << solution.phase1_value << "\n";
  out << "pivots " << solution.pivots << "\n";
  if (solution.status != LPStatus::optimal) return out.str();
  out << "value " << solution.value << "\n";
  for (std::size_t j = 0; j < solution.x.size(); ++j) {
    if (solution.x[j].is_zero()) continue;
    out << "x" << j << " (" << model.pairs[j].first << "," << model.pairs[j].second
        << ") = " << solution.x[j] << "\n";
  }
  return out.str();
}

}  // namespace kmpmd
