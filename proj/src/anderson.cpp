#include "fdgmaa/anderson.hpp"

#include <algorithm>
#include <cmath>

#include "fdgmaa/errors.hpp"

namespace fdgmaa {

PairMemory::PairMemory(std::size_t capacity, std::size_t dim) : capacity_(capacity), dim_(dim) {
  if (capacity_ == 0) throw InvalidArgument("PairMemory: capacity must be positive");
}

void PairMemory::update(std::size_t k, std::span<const double> w_i,
                        std::span<const double> grad_i, std::span<const double> w_j,
                        std::span<const double> grad_j) {
  if (!entries_.empty() && k <= entries_.back().k) {
    throw InvalidArgument("PairMemory: iteration indices must increase");
  }
  if (w_i.size() != dim_ || grad_i.size() != dim_ || w_j.size() != dim_ ||
      grad_j.size() != dim_) {
    throw InvalidArgument("PairMemory: dimension mismatch");
  }
  entries_.push_back({k, Vector(w_i.begin(), w_i.end()), Vector(grad_i.begin(), grad_i.end()),
                      Vector(w_j.begin(), w_j.end()), Vector(grad_j.begin(), grad_j.end())});
  if (entries_.size() > capacity_) entries_.pop_front();
}

std::vector<std::size_t> PairMemory::indices() const {
  std::vector<std::size_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.k);
  return out;
}

DenseMatrix PairMemory::stack(Vector Entry::*field) const {
  DenseMatrix out(dim_, entries_.size());
  for (std::size_t t = 0; t < entries_.size(); ++t) {
    const Vector& v = entries_[t].*field;
    for (std::size_t r = 0; r < dim_; ++r) out(r, t) = v[r];
  }
  return out;
}

DenseMatrix PairMemory::iterates_i() const { return stack(&Entry::w_i); }
DenseMatrix PairMemory::iterates_j() const { return stack(&Entry::w_j); }
DenseMatrix PairMemory::grads_i() const { return stack(&Entry::grad_i); }
DenseMatrix PairMemory::grads_j() const { return stack(&Entry::grad_j); }

SafeguardParams SafeguardParams::make(double lipschitz, double beta, std::optional<double> c1,
                                      std::optional<double> c2) {
  if (!(lipschitz > 0.0)) throw InvalidArgument("SafeguardParams: L must be positive");
  if (!(beta > 0.0 && beta * lipschitz < 1.0)) {
    throw InvalidArgument("SafeguardParams: step size must lie in (0, 1/L)");
  }
  SafeguardParams p;
  p.lipschitz = lipschitz;
  p.beta = beta;
  p.c1 = c1.value_or(beta * (1.0 - beta * lipschitz));
  p.c2 = c2.value_or((1.0 / beta - lipschitz) / 2.0);
  if (!(p.c1 > 0.0 && p.c2 > 0.0)) {
    throw InvalidArgument("SafeguardParams: c1 and c2 must be positive");
  }
  return p;
}

double SafeguardParams::theta1() const { return std::min(beta * (1.0 - beta * lipschitz), c1); }

double SafeguardParams::theta2() const { return std::min((1.0 / beta - lipschitz) / 2.0, c2); }

namespace {

Coefficients unit_coefficients(std::size_t s, bool fallback) {
  Coefficients out{Vector(s, 0.0), Vector(s, 0.0), fallback};
  out.alpha_ij[s - 1] = 1.0;
  out.alpha_ji[s - 1] = 1.0;
  return out;
}

// lhs <= rhs up to rounding in the last few bits, so the plain step, which
// meets the default thresholds with equality, is never rejected by rounding.
bool within_threshold(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * (std::abs(lhs) + std::abs(rhs));
}

}  // namespace

Coefficients solve_coefficients(const PairMemory& mem, std::span<const double> w_i,
                                std::span<const double> w_j, double relative_ridge) {
  const std::size_t s = mem.size();
  const std::size_t d = mem.dim();
  if (s == 0) throw InvalidArgument("solve_coefficients: empty memory");
  if (s == 1) return unit_coefficients(1, false);

  DenseMatrix m(d, 2 * s);
  DenseMatrix a(d + 2, 2 * s);
  for (std::size_t t = 0; t < s; ++t) {
    const auto gi = mem.grad_i(t);
    const auto gj = mem.grad_j(t);
    const auto wi = mem.iterate_i(t);
    const auto wj = mem.iterate_j(t);
    for (std::size_t r = 0; r < d; ++r) {
      m(r, t) = gi[r];
      m(r, s + t) = -gj[r];
      a(r, t) = wi[r];
      a(r, s + t) = wj[r];
    }
    a(d, t) = 1.0;
    a(d + 1, s + t) = 1.0;
  }
  Vector c(d + 2);
  for (std::size_t r = 0; r < d; ++r) c[r] = w_i[r] + w_j[r];
  c[d] = 1.0;
  c[d + 1] = 1.0;

  double trace = 0.0;
  for (double v : m.entries()) trace += v * v;
  const double ridge = relative_ridge * trace / static_cast<double>(2 * s);

  try {
    const Vector z = solve_eq_constrained_lsq(m, a, c, ridge);
    Coefficients out{Vector(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(s)),
                     Vector(z.begin() + static_cast<std::ptrdiff_t>(s), z.end()), false};
    return out;
  } catch (const SingularSystem&) {
    return unit_coefficients(s, true);
  }
}

EdgeHalf aa_candidate_step(const PairMemory& mem, std::span<const double> alpha_ij,
                           std::span<const double> alpha_ji, double beta) {
  const std::size_t s = mem.size();
  const std::size_t d = mem.dim();
  if (s == 0 || alpha_ij.size() != s || alpha_ji.size() != s) {
    throw InvalidArgument("aa_candidate_step: coefficient length must equal memory size");
  }
  Vector tilde_ij(d, 0.0);
  Vector tilde_ji(d, 0.0);
  Vector gap(d, 0.0);
  Vector gj(d, 0.0);
  for (std::size_t t = 0; t < s; ++t) {
    axpy(alpha_ij[t], mem.iterate_i(t), tilde_ij);
    axpy(alpha_ji[t], mem.iterate_j(t), tilde_ji);
    axpy(alpha_ij[t], mem.grad_i(t), gap);
    axpy(alpha_ji[t], mem.grad_j(t), gj);
  }
  // Remove the constraint residual of the coefficient solve by projecting
  // onto {u + v = w_i^k + w_j^k}; the residual is exactly zero for s == 1.
  const auto wi = mem.iterate_i(s - 1);
  const auto wj = mem.iterate_j(s - 1);
  for (std::size_t r = 0; r < d; ++r) {
    const double residual = (wi[r] + wj[r]) - (tilde_ij[r] + tilde_ji[r]);
    tilde_ij[r] += 0.5 * residual;
    tilde_ji[r] += 0.5 * residual;
  }
  EdgeHalf out{Vector(d), Vector(d)};
  for (std::size_t r = 0; r < d; ++r) {
    const double step = beta * (gap[r] - gj[r]);
    out.w_ij[r] = tilde_ij[r] - step;
    out.w_ji[r] = tilde_ji[r] + step;
  }
  return out;
}

double descent_threshold(const EdgeInputs& in, std::span<const double> u,
                         std::span<const double> v, double a, double b) {
  const double grad_gap = squared_distance(in.grad_i, in.grad_j);
  const double moves = squared_distance(u, in.w_i) + squared_distance(v, in.w_j);
  return std::min(-a * grad_gap, -b * moves);
}

bool safeguard_simple(const EdgeInputs& in, std::span<const double> w_bar_ij,
                      std::span<const double> w_bar_ji, const SafeguardParams& params) {
  const Vector move_i = subtract(w_bar_ij, in.w_i);
  const Vector move_j = subtract(w_bar_ji, in.w_j);
  const double half_l = 0.5 * params.lipschitz;
  const double lhs = dot(in.grad_i, move_i) + half_l * squared_norm(move_i) +
                     dot(in.grad_j, move_j) + half_l * squared_norm(move_j);
  return within_threshold(lhs, descent_threshold(in, w_bar_ij, w_bar_ji, params.c1, params.c2));
}

bool safeguard_exact(const EdgeInputs& in, double value_bar_ij, double value_bar_ji,
                     std::span<const double> w_bar_ij, std::span<const double> w_bar_ji,
                     const SafeguardParams& params) {
  const double lhs = value_bar_ij + value_bar_ji - in.value_i - in.value_j;
  return within_threshold(lhs, descent_threshold(in, w_bar_ij, w_bar_ji, params.c1, params.c2));
}

EdgeUpdate edge_update(const PairMemory& mem, const EdgeInputs& in, const SafeguardParams& params,
                       const AndersonOptions& options, const DualEvaluator& eval_i,
                       const DualEvaluator& eval_j) {
  if (mem.empty()) throw InvalidArgument("edge_update: memory must contain iteration k");
  const Coefficients coef = solve_coefficients(mem, in.w_i, in.w_j, options.relative_ridge);
  EdgeHalf candidate = aa_candidate_step(mem, coef.alpha_ij, coef.alpha_ji, params.beta);

  EdgeUpdate out;
  out.coefficient_fallback = coef.fallback_used;
  if (options.mode == SafeguardMode::simple) {
    out.accepted = safeguard_simple(in, candidate.w_ij, candidate.w_ji, params);
  } else {
    if (!eval_i || !eval_j) {
      throw InvalidArgument("edge_update: exact safe-guard needs dual evaluators");
    }
    const double v_ij = eval_i(candidate.w_ij).value;
    const double v_ji = eval_j(candidate.w_ji).value;
    out.accepted = safeguard_exact(in, v_ij, v_ji, candidate.w_ij, candidate.w_ji, params);
    if (out.accepted) {
      out.value_ij = v_ij;
      out.value_ji = v_ji;
    }
  }
  if (out.accepted) {
    out.half = std::move(candidate);
  } else {
    out.half = edge_gradient_step(in.w_i, in.w_j, in.grad_i, in.grad_j, params.beta);
  }
  return out;
}

double descent_certificate_margin(const EdgeInputs& in, const EdgeHalf& half, double value_ij,
                                  double value_ji, const SafeguardParams& params, double slack) {
  const double lhs = value_ij + value_ji - in.value_i - in.value_j;
  const double rhs = descent_threshold(in, half.w_ij, half.w_ji, params.theta1(), params.theta2());
  return rhs - lhs + slack;
}

bool check_descent_certificate(const EdgeInputs& in, const EdgeHalf& half, double value_ij,
                               double value_ji, const SafeguardParams& params, double slack) {
  return descent_certificate_margin(in, half, value_ij, value_ji, params, slack) >= 0.0;
}

ClassicAaStep classic_aa_step(std::span<const std::pair<Vector, Vector>> history, std::size_t m,
                              double ridge) {
  if (history.empty()) throw InvalidArgument("classic_aa_step: empty history");
  const std::size_t s = std::min(m + 1, history.size());
  const auto window = history.subspan(history.size() - s);
  const std::size_t d = window.front().first.size();

  ClassicAaStep out;
  out.alpha.assign(s, 0.0);
  if (s == 1) {
    out.alpha[0] = 1.0;
  } else {
    DenseMatrix residuals(d, s);
    for (std::size_t t = 0; t < s; ++t) {
      for (std::size_t r = 0; r < d; ++r) {
        residuals(r, t) = window[t].second[r] - window[t].first[r];
      }
    }
    const DenseMatrix ones(1, s, 1.0);
    const Vector one{1.0};
    try {
      out.alpha = solve_eq_constrained_lsq(residuals, ones, one, ridge);
    } catch (const SingularSystem&) {
      out.alpha.assign(s, 0.0);
      out.alpha[s - 1] = 1.0;
    }
  }
  out.next.assign(d, 0.0);
  for (std::size_t t = 0; t < s; ++t) axpy(out.alpha[t], window[t].second, out.next);
  return out;
}

}  // namespace fdgmaa
