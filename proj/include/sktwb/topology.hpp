#pragma once

// Poincare polynomials of blow-ups: at a point, along a submanifold, and
// along a schedule of successive blow-ups.

#include <string>
#include <utility>
#include <vector>

#include "sktwb/cohomology.hpp"

namespace sktwb {

/// Poincare polynomial of CP^{m-1}: 1 + t^2 + ... + t^{2(m-1)}.
inline PoincarePoly cp_poincare(int m) {
  if (m < 1) throw InputError("CP^{m-1} needs m >= 1");
  std::vector<long> b(static_cast<std::size_t>(2 * m - 1), 0);
  for (int j = 0; j < m; ++j) b[static_cast<std::size_t>(2 * j)] = 1;
  return PoincarePoly(std::move(b));
}

struct BlowupStep {
  enum class Kind { point, submanifold };
  Kind kind = Kind::point;
  int ambient_dim = 0;                     // complex dimension n
  int center_dim = 0;                      // complex dimension k of the center
  PoincarePoly center = PoincarePoly({1});
  long count = 1;                          // number of disjoint centers of this type

  static BlowupStep point(int n, long count = 1) { return {Kind::point, n, 0, PoincarePoly({1}), count}; }
  static BlowupStep along(int n, int k, PoincarePoly center, long count = 1) {
    return {Kind::submanifold, n, k, std::move(center), count};
  }

  void validate() const {
    if (ambient_dim < 1) throw InputError("blow-up ambient dimension must be >= 1");
    if (count < 0) throw InputError("blow-up count must be nonnegative");
    if (kind == Kind::point) {
      if (center_dim != 0 || !(center == PoincarePoly({1})))
        throw InputError("a point blow-up has a point as center");
      return;
    }
    if (center_dim < 0 || center_dim > ambient_dim - 1)
      throw InputError("center dimension must satisfy 0 <= k <= n - 1");
    if (center.degree() > 2 * center_dim) throw InputError("center Poincare polynomial has degree > 2k");
    if (center[0] < 1) throw InputError("center must be nonempty (b0 >= 1)");
  }
};

/// Change of the Poincare polynomial caused by one blow-up of the step.
inline PoincarePoly blowup_contribution(const BlowupStep& step) {
  step.validate();
  if (step.kind == BlowupStep::Kind::point) {
    std::vector<long> c = cp_poincare(step.ambient_dim).b;
    c[0] = 0;
    return PoincarePoly(std::move(c));
  }
  const int top = step.ambient_dim - step.center_dim - 1;
  if (top < 1) return {};
  std::vector<long> s(static_cast<std::size_t>(2 * top + 1), 0);
  for (int j = 1; j <= top; ++j) s[static_cast<std::size_t>(2 * j)] = 1;
  return step.center * PoincarePoly(std::move(s));
}

inline PoincarePoly blowup_poincare(const PoincarePoly& pm, const BlowupStep& step) {
  if (pm.degree() > 2 * step.ambient_dim) throw InputError("Poincare polynomial degree exceeds 2n");
  return pm + step.count * blowup_contribution(step);
}

struct ScheduleReport {
  PoincarePoly result;
  std::vector<PoincarePoly> stages;        // polynomial after each step
  std::vector<PoincarePoly> contributions; // total added by each step
  bool b0_b1_constant = true;
};

inline ScheduleReport resolve_schedule(const PoincarePoly& pm, const std::vector<BlowupStep>& steps) {
  ScheduleReport r;
  r.result = pm;
  for (const auto& s : steps) {
    PoincarePoly next = blowup_poincare(r.result, s);
    r.contributions.push_back(s.count * blowup_contribution(s));
    if (next[0] != pm[0] || next[1] != pm[1]) r.b0_b1_constant = false;
    r.stages.push_back(next);
    r.result = std::move(next);
  }
  return r;
}

}  // namespace sktwb
