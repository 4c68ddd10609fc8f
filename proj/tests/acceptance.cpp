// One PASS/FAIL line per acceptance criterion.
//   acceptance                   exit 1 if any criterion fails
//   acceptance --expect-fail 3   exit 0 iff exactly the listed criteria fail

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <set>

#include "common.hpp"

using namespace sktwb;
using namespace testing_util;

namespace {

constexpr std::uint64_t seed = 0x5eed2024;

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

Model model_of(const std::string& name, std::vector<std::string> sets = {}, bool specialize = true) {
  Manifest m = load(name);
  return build_model(m, merged_assignment(m, sets), specialize);
}

// 1
Outcome iwasawa_dichotomy() {
  Outcome o;
  Model sym = model_of("iwasawa_ts", {}, false);
  auto sys = extract_constraints(sym.complex());
  o.check(sys.rows.size() == 1, "expected one obstruction row");
  o.check(sys.constrained_unknowns() == std::vector<std::string>{"H33"}, "row not supported on H33 alone");
  if (sys.rows.size() == 1) {
    const Ring& r = sym.alg().ring();
    const Scalar q = sys.rows[0].coeffs[2] / (r.parameter("t") * r.parameter("t") - r.parameter("s") * r.parameter("s"));
    o.check(q.is_rational() && !q.is_zero(), "H33 coefficient not a multiple of t^2 - s^2");
  }

  auto solve = [](const char* t, const char* s) {
    Model m = model_of("iwasawa_ts", {std::string("t=") + t, std::string("s=") + s});
    return feasibility(extract_constraints(m.complex()));
  };
  auto ok = solve("1", "1");
  o.check(ok.kind == FeasibilityVerdict::Kind::feasible, "(1,1) not FEASIBLE");
  o.check(ok.witness == Matrix<Scalar>::identity(3), "(1,1) witness is not the identity");
  for (auto [t, s] : std::vector<std::pair<const char*, const char*>>{{"2", "1"}, {"3", "1"}, {"1", "2"}}) {
    auto v = solve(t, s);
    o.check(v.kind == FeasibilityVerdict::Kind::infeasible && v.forced_zero == 2,
            std::string("(") + t + "," + s + ") lacks an H33 = 0 certificate");
  }
  return o;
}

// 2
Outcome second_family() {
  Outcome o;
  Model m = model_of("nts_family2", {}, false);
  auto c = classify(HermitianMetric::identity(m.complex()));
  o.check(!m.alg().has_constant_coefficients(), "family was specialized");
  o.check(c.skt, "skt flag false");
  o.check(c.ddbar_f.is_zero(), "obstruction " + c.ddbar_f.to_string());
  return o;
}

// 3
Outcome integrability() {
  Outcome o;
  Model m = model_of("iwasawa_ts", {}, false);
  const auto& cs = m.complex();
  o.check(cs.check_integrable().pass, "J not integrable");
  const Ring& r = m.alg().ring();
  BigradedForm display{3, form(r, 6, "-(I/2)*t*(phi1^phibar1 + 2*phi2^phibar2) + s*phi1^phi2")};
  BigradedForm got = cs.d(cs.phi(2));
  if (got != display) {
    BigradedForm diff{3, got.form() - display.form()};
    o.check(false, "d phi3 = " + got.to_string() + " differs from the reference value by " + diff.to_string());
  }
  return o;
}

// 4
Outcome six_torus() {
  Outcome o;
  Model m = model_of("t6_sigma");
  const auto& cs = m.complex();
  const Ring& r = m.alg().ring();
  Form df = r.function("f", {3}) * Form::generator(6, 2) + r.function("f", {6}) * Form::generator(6, 5);
  Form phi3 = cs.reconstruct(cs.phi(2)), phibar3 = cs.reconstruct(cs.phibar(2));
  BigradedForm expected = cs.bigrade(r.imaginary_unit() / Scalar(2) * wedge(df, phi3 + phibar3));
  o.check(cs.d(cs.phi(0)) == expected, "(a) d phi1 = " + cs.d(cs.phi(0)).to_string());

  auto g = m.hermitian();
  o.check(skt_check_formal(g.fundamental_form(), cs).is_zero(), "(b) ddbar F != 0");

  const Form f = g.fundamental_form_real();
  auto ac = check_action(m.group(), m.alg(), &cs, &f);
  o.check(ac.automorphism && ac.holomorphic.value_or(false) && ac.isometric.value_or(false), "(c) " + ac.witness);

  auto fp = fixed_points(*m.torus);
  std::set<std::vector<Rational>> halves;
  for (int k = 0; k < 64; ++k) {
    std::vector<Rational> x;
    for (int j = 5; j >= 0; --j) x.push_back((k >> j) & 1 ? Rational(1, 2) : Rational(0));
    halves.insert(x);
  }
  std::set<std::vector<Rational>> got(fp.representatives.begin(), fp.representatives.end());
  o.check(fp.components == 64 && fp.dimension == 0 && got == halves, "(d) fixed points");

  o.check(invariant_betti(m.alg(), m.group()) == PoincarePoly({1, 0, 15, 0, 15, 0, 1}), "(e) invariant Betti");
  return o;
}

// 5
Outcome kodaira_thurston() {
  Outcome o;
  struct Case {
    const char* name;
    long b1;
    std::vector<std::pair<int, int>> table;  // lambda* phi_k = c phi_j as (k, j)
    std::vector<bool> xi;  // c = xi, else 1
  };
  const std::vector<Case> cases = {
      {"kt_x_t4", 7, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {true, false, true, true}},
      {"kt_x_kt", 6, {{0, 2}, {1, 3}, {2, 0}, {3, 1}}, {true, false, true, false}},
  };
  for (const auto& c : cases) {
    Model m = model_of(c.name);
    const auto& cs = m.complex();
    o.check(betti(m.alg())[1] == c.b1, std::string(c.name) + " b1");
    o.check(invariant_betti(m.alg(), m.group())[1] == 1, std::string(c.name) + " invariant b1");
    const Scalar xi = m.alg().ring().cube_root_of_unity();
    const auto& lambda = m.group().generators()[0];
    for (std::size_t k = 0; k < c.table.size(); ++k) {
      const auto [src, dst] = c.table[k];
      Form img = pullback(lambda, cs.holomorphic_coframe()[static_cast<std::size_t>(src)]);
      Form want = (c.xi[k] ? xi : Scalar(1)) * cs.holomorphic_coframe()[static_cast<std::size_t>(dst)];
      o.check(img == want, std::string(c.name) + " lambda* phi" + std::to_string(src + 1));
    }
  }
  return o;
}

// 6
Outcome blowups() {
  Outcome o;
  o.check(blowup_contribution(BlowupStep::point(3)) == PoincarePoly({0, 0, 1, 0, 1}), "point in n=3");
  for (int n = 1; n <= 5; ++n) {
    PoincarePoly center = n > 1 ? cp_poincare(n - 1) : PoincarePoly({1});
    const PoincarePoly pm = cp_poincare(n);
    o.check(blowup_poincare(pm, BlowupStep::along(n, n - 1, center)) == pm, "divisor n=" + std::to_string(n));
  }
  Gen g(seed);
  for (int c = 0; c < 200; ++c) {
    const int n = static_cast<int>(g.integer(1, 4));
    std::vector<BlowupStep> steps;
    for (int s = static_cast<int>(g.integer(0, 4)); s > 0; --s) {
      if (g.coin()) {
        steps.push_back(BlowupStep::point(n, g.integer(0, 5)));
      } else {
        const int k = static_cast<int>(g.integer(0, n - 1));
        steps.push_back(BlowupStep::along(n, k, k > 0 ? cp_poincare(k) : PoincarePoly({1}), g.integer(0, 3)));
      }
    }
    std::vector<long> start(static_cast<std::size_t>(2 * n + 1), 1);
    if (!resolve_schedule(PoincarePoly(start), steps).b0_b1_constant) {
      o.check(false, "b0/b1 moved");
      break;
    }
  }
  auto r = resolve_schedule(PoincarePoly({1, 0, 15, 0, 15, 0, 1}), {BlowupStep::point(3, 64)});
  o.check(r.result == PoincarePoly({1, 0, 79, 0, 79, 0, 1}), "64-point schedule gave " + r.result.to_string());
  return o;
}

// 7
Outcome properties() {
  Outcome o;
  auto r = ring12();
  Gen g(seed);
  auto homogeneous = [&](int dim) {
    return g.form(*r, dim, static_cast<int>(g.integer(0, dim)), static_cast<int>(g.integer(1, 3)));
  };
  int bad_leibniz = 0, bad_d2 = 0, bad_dolbeault = 0, bad_star = 0, bad_pd = 0, bad_witness = 0;
  for (int c = 0; c < 200; ++c) {
    const int n = static_cast<int>(g.integer(2, 3));
    Algebra alg = random_nilpotent(r, n, g);
    if (!check_d_squared(alg).pass) continue;
    Form a = homogeneous(2 * n), b = homogeneous(2 * n);
    const int sign = a.degree() % 2 == 0 ? 1 : -1;
    if (alg.d(wedge(a, b)) != wedge(alg.d(a), b) + sign * wedge(a, alg.d(b))) ++bad_leibniz;
    if (!alg.d(alg.d(a)).is_zero()) ++bad_d2;

    auto cs = ComplexStructure::from_j(alg, standard_j(2 * n));
    BigradedForm x{n, a};
    if (!cs.del(cs.del(x)).is_zero() || !cs.delbar(cs.delbar(x)).is_zero() ||
        !(cs.del(cs.delbar(x)) + cs.delbar(cs.del(x))).is_zero())
      ++bad_dolbeault;

    HermitianMetric h(cs, random_pd(*r, n, g));
    const int k = a.degree();
    if (h.hodge_star(h.hodge_star(a)) != ((k * (2 * n - k)) % 2 == 0 ? 1 : -1) * a) ++bad_star;

    auto v = feasibility(extract_constraints(cs), 50, seed + static_cast<std::uint64_t>(c));
    if (v.kind == FeasibilityVerdict::Kind::feasible && !classify(HermitianMetric(cs, v.witness)).skt) ++bad_witness;
  }
  for (const char* name : {"t6_sigma", "kt_x_t4", "kt_x_kt", "torus2n", "h3r3_family"}) {
    Model m = model_of(name);
    auto b = betti(m.alg());
    for (int k = 0; k <= m.alg().dim(); ++k)
      if (b[static_cast<std::size_t>(k)] != b[static_cast<std::size_t>(m.alg().dim() - k)]) ++bad_pd;
    if (!m.action) continue;
    for (int k = 0; k <= m.alg().dim(); ++k) {
      auto p = averaging_projector(m.group(), k);
      o.check(p * p == p, std::string(name) + " projector not idempotent");
    }
  }
  o.check(bad_leibniz == 0, "Leibniz");
  o.check(bad_d2 == 0, "d^2");
  o.check(bad_dolbeault == 0, "Dolbeault identities");
  o.check(bad_star == 0, "star sign");
  o.check(bad_pd == 0, "Poincare duality");
  o.check(bad_witness == 0, "witness round-trip");
  return o;
}

// 8
Outcome surfaces() {
  Outcome o;
  auto r = ring12();
  Gen g(seed + 8);
  for (int c = 0; c < 100; ++c) {
    Algebra alg = c % 4 == 0 ? Algebra::abelian(r, 4) : random_nilpotent(r, 2, g);
    auto cs = ComplexStructure::from_j(alg, standard_j(4));
    auto k = classify(HermitianMetric(cs, random_pd(*r, 2, g)));
    if (k.skt != k.standard) {
      o.check(false, "case " + std::to_string(c));
      break;
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds, 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Iwasawa dichotomy", 5, iwasawa_dichotomy},
      {2, "second family strong KT", 5, second_family},
      {3, "Iwasawa integrability and d phi3", 0, integrability},
      {4, "six-torus example", 10, six_torus},
      {5, "Kodaira-Thurston products", 30, kodaira_thurston},
      {6, "blow-up calculus", 0, blowups},
      {7, "property suites", 60, properties},
      {8, "n=2 strong KT equals standard", 0, surfaces},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && secs >= c.limit) o.check(false, "over time");
    if (!o.pass) failed.insert(c.id);
    std::printf("%s %d %s (%.2f s%s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit > 0 ? (" < " + std::to_string(static_cast<int>(c.limit)) + " s").c_str() : "",
                o.detail.empty() ? "" : ": ", o.detail.c_str());
  }
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (!expect_fail.empty()) {
    if (failed == expected) {
      std::printf("failures match --expect-fail\n");
      return 0;
    }
    std::printf("failures do not match --expect-fail\n");
    return 1;
  }
  return failed.empty() ? 0 : 1;
}
