#pragma once

// Chevalley-Eilenberg complex of a Lie algebra given by its structure
// equations d e^k, extended by a coordinate derivation so that coefficients
// may be formal functions of base coordinates x_j with dx_j a 1-form.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sktwb/form.hpp"

namespace sktwb {

class Algebra {
 public:
  /// `differentials[k]` is d of generator k (degree 2 or zero).
  /// `coordinates[j-1]` is the 1-form dx_j; by default dx_j = e^j.
  Algebra(std::shared_ptr<const Ring> ring, int dim, std::vector<Form> differentials,
          std::vector<Form> coordinates = {})
      : ring_(std::move(ring)),
        dim_(dim),
        diff_(std::move(differentials)),
        coords_(std::move(coordinates)),
        cache_(std::make_shared<Cache>()) {
    if (!ring_) throw InputError("algebra needs a coefficient ring");
    if (dim < 0 || dim > 32) throw InputError("algebra dimension must be in [0, 32]");
    if (diff_.empty()) diff_.assign(static_cast<std::size_t>(dim), Form(dim));
    if (static_cast<int>(diff_.size()) != dim) throw InputError("one differential per generator required");
    for (std::size_t k = 0; k < diff_.size(); ++k) {
      if (diff_[k].dim() != dim) throw InputError("differential lives in the wrong algebra");
      if (!diff_[k].is_homogeneous(2))
        throw InputError("d e" + std::to_string(k + 1) + " must be a 2-form");
    }
    if (coords_.empty())
      for (int j = 0; j < dim; ++j) coords_.push_back(Form::generator(dim, j));
    for (const auto& c : coords_)
      if (c.dim() != dim || !c.is_homogeneous(1)) throw InputError("coordinate differentials must be 1-forms");
  }

  /// Abelian algebra (torus).
  static Algebra abelian(std::shared_ptr<const Ring> ring, int dim) {
    return Algebra(std::move(ring), dim, {});
  }

  int dim() const noexcept { return dim_; }
  const Ring& ring() const noexcept { return *ring_; }
  const std::shared_ptr<const Ring>& ring_ptr() const noexcept { return ring_; }
  const std::vector<Form>& differentials() const noexcept { return diff_; }
  const Form& differential(int k) const { return diff_.at(static_cast<std::size_t>(k)); }
  const std::vector<Form>& coordinates() const noexcept { return coords_; }
  Form generator(int k) const { return Form::generator(dim_, k); }

  bool is_abelian() const {
    for (const auto& f : diff_)
      if (!f.is_zero()) return false;
    return true;
  }

  /// Exterior derivative: derivation of coefficients along dx_j plus the
  /// graded Leibniz extension of the structure equations.
  Form d(const Form& a) const {
    if (a.dim() != dim_) throw InputError("form does not belong to this algebra");
    Form out(dim_);
    for (const auto& [m, c] : a.terms()) {
      for (const auto& [j, cj] : ring_->derive(c)) {
        if (j > static_cast<int>(coords_.size()))
          throw InputError("coefficient depends on coordinate x" + std::to_string(j) +
                           " beyond the coframe");
        out += cj * wedge(coords_[static_cast<std::size_t>(j - 1)], Form::monomial(dim_, m));
      }
      const Form& dm = d_monomial(m);
      if (!dm.is_zero()) out += c * dm;
    }
    return out;
  }

  /// Apply a scalar map to every coefficient of the structure.
  template <class F>
  Algebra map_coefficients(F&& fn) const {
    std::vector<Form> diff, coords;
    for (const auto& f : diff_) diff.push_back(f.map_coefficients(fn));
    for (const auto& f : coords_) coords.push_back(f.map_coefficients(fn));
    return Algebra(ring_, dim_, std::move(diff), std::move(coords));
  }

  Algebra specialized(const std::map<std::string, Rational>& assignment) const {
    return map_coefficients([&](const Scalar& c) { return ring_->substitute(c, assignment); });
  }

  /// True when no structure coefficient involves parameters or functions.
  bool has_constant_coefficients() const {
    for (const auto& f : diff_)
      for (const auto& [m, c] : f.terms())
        if (!c.is_constant()) return false;
    return true;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<Mask, Form> d;
  };

  const Form& d_monomial(Mask m) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      auto it = cache_->d.find(m);
      if (it != cache_->d.end()) return it->second;
    }
    Form r(dim_);
    if (m != 0) {
      const int low = std::countr_zero(m);
      const Mask rest = m & (m - 1);
      r = wedge(diff_[static_cast<std::size_t>(low)], Form::monomial(dim_, rest)) -
          wedge(generator(low), d_monomial(rest));
    }
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->d.emplace(m, std::move(r)).first->second;
  }

  std::shared_ptr<const Ring> ring_;
  int dim_;
  std::vector<Form> diff_;
  std::vector<Form> coords_;
  std::shared_ptr<Cache> cache_;
};

struct DSquaredCheck {
  bool pass = true;
  int generator = -1;  // 0-based index of the first failing generator
  Form witness;        // d(d e^k)
};

/// d^2 = 0 on every generator, identically in parameters (Jacobi identity).
inline DSquaredCheck check_d_squared(const Algebra& alg) {
  for (int k = 0; k < alg.dim(); ++k) {
    Form dd = alg.d(alg.differential(k));
    if (!dd.is_zero()) return {false, k, std::move(dd)};
  }
  return {};
}

}  // namespace sktwb
