#pragma once

// Commands of the workbench: each one turns a manifest (plus CLI overrides)
// into a report document and an exit code. Reports are ordered JSON; the
// text format is a direct rendering of the same document.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sktwb/manifest.hpp"
#include "sktwb/skt_solver.hpp"

namespace sktwb {

using Json = nlohmann::ordered_json;

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_input_error = 2 };

struct RunOptions {
  std::vector<std::string> sets;  // "name=value"
  bool symbolic = false;
  bool invariant = false;
  int trials = 200;
  std::uint64_t seed = default_seed;
};

struct CommandResult {
  Json report;
  int exit_code = exit_ok;
};

inline Rational parse_rational_text(const std::string& text) {
  auto t = tokenize(text, 1);
  std::size_t p = 0;
  Rational r = manifest_detail::parse_rational(t, p);
  manifest_detail::expect_end(t, p);
  return r;
}

/// Manifest [specialize] entries overridden by --set name=value.
inline std::map<std::string, Rational> merged_assignment(const Manifest& m, const std::vector<std::string>& sets) {
  std::map<std::string, Rational> out;
  for (const auto& [k, v] : m.specialize) out[k] = v;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError("--set expects name=value, got '" + s + "'");
    const std::string name = manifest_detail::trim(s.substr(0, eq));
    if (!m.ring->is_parameter(name)) throw InputError("--set: '" + name + "' is not a declared parameter");
    try {
      out[name] = parse_rational_text(s.substr(eq + 1));
    } catch (const ParseError&) {
      throw InputError("--set: value of '" + name + "' must be a rational number");
    }
  }
  return out;
}

/// Everything a command needs, built from a manifest.
struct Model {
  Manifest manifest;
  std::map<std::string, Rational> assignment;
  bool specialized = false;
  std::optional<Algebra> algebra;
  DSquaredCheck d_squared;
  std::optional<ComplexStructure> cs;
  std::string complex_error;              // J^2 != -1, inconsistent J/phi, ...
  std::optional<Matrix<Scalar>> metric;   // explicit H; identity when absent
  std::optional<GroupAction> action;
  std::optional<AffineTorusMap> torus;

  const Algebra& alg() const { return *algebra; }

  void require_d_squared() const {
    if (!d_squared.pass)
      throw CheckFailure("d^2 != 0 on e" + std::to_string(d_squared.generator + 1),
                         d_squared.witness.to_string(real_names(alg().dim())));
  }
  const ComplexStructure& complex() const {
    require_d_squared();
    if (!complex_error.empty()) throw CheckFailure(complex_error, "");
    if (!cs) throw InputError("the manifest has no [complex] section");
    return *cs;
  }
  HermitianMetric hermitian() const {
    const ComplexStructure& c = complex();
    return metric ? HermitianMetric(c, *metric) : HermitianMetric::identity(c);
  }
  const GroupAction& group() const {
    if (!action) throw InputError("the manifest has no [action] section");
    return *action;
  }
};

inline Model build_model(const Manifest& m, std::map<std::string, Rational> assignment, bool specialize = true) {
  Model model;
  model.manifest = m;
  model.assignment = std::move(assignment);
  model.specialized = specialize && !model.assignment.empty();
  const Ring& ring = *m.ring;
  auto sub = [&](const Scalar& c) { return model.specialized ? ring.substitute(c, model.assignment) : c; };
  auto sub_form = [&](const Form& f) { return f.map_coefficients(sub); };

  std::vector<Form> diffs;
  for (const auto& d : m.differentials) diffs.push_back(sub_form(d));
  model.algebra.emplace(m.ring, m.dim, std::move(diffs));
  model.d_squared = check_d_squared(*model.algebra);

  if (m.has_complex()) {
    try {
      std::optional<Matrix<Scalar>> j;
      if (m.j) j = m.j->map(sub);
      std::optional<std::vector<Form>> phis;
      if (m.phis) {
        phis.emplace();
        for (const auto& p : *m.phis) phis->push_back(sub_form(p));
      }
      if (j && phis) model.cs = ComplexStructure::from_both(*model.algebra, *j, *phis);
      else if (j) model.cs = ComplexStructure::from_j(*model.algebra, *j);
      else model.cs = ComplexStructure::from_coframe(*model.algebra, *phis);
    } catch (const CheckFailure& e) {
      model.complex_error = e.what();
    }
  }

  if (m.has_metric && !m.metric_identity) {
    const auto n = static_cast<std::size_t>(m.dim / 2);
    Matrix<Scalar> h(n, n);
    std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
    for (const auto& [jk, v] : m.metric_entries) {
      const auto a = static_cast<std::size_t>(jk.first), b = static_cast<std::size_t>(jk.second);
      h(a, b) = sub(v);
      given[a][b] = true;
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!given[a][b] && given[b][a]) h(a, b) = h(b, a).conj();
    model.metric = std::move(h);
  }

  if (m.has_action) {
    const auto dim = static_cast<std::size_t>(m.dim);
    std::vector<std::string> names;
    std::vector<Matrix<Scalar>> gens;
    for (const auto& g : m.action) {
      names.push_back(g.name);
      Matrix<Scalar> p = Matrix<Scalar>::identity(dim);
      switch (g.kind) {
        case ActionGenerator::Kind::identity: break;
        case ActionGenerator::Kind::minus_identity: p = p.scaled(Scalar(-1)); break;
        case ActionGenerator::Kind::matrix_real:
          for (const auto& [i, f] : g.images) {
            for (std::size_t k = 0; k < dim; ++k) p(static_cast<std::size_t>(i), k) = Scalar();
            for (const auto& [mask, c] : f.terms())
              p(static_cast<std::size_t>(i), static_cast<std::size_t>(std::countr_zero(mask))) = sub(c);
          }
          break;
        case ActionGenerator::Kind::matrix_complex: {
          if (!model.cs) throw InputError("action on phi needs a valid [complex] section");
          const std::size_t n = dim / 2;
          Matrix<Scalar> q(n, dim);
          for (std::size_t j = 0; j < n; ++j) q(j, j) = Scalar(1);
          for (const auto& [j, f] : g.images) {
            for (std::size_t k = 0; k < dim; ++k) q(static_cast<std::size_t>(j), k) = Scalar();
            for (const auto& [mask, c] : f.terms())
              q(static_cast<std::size_t>(j), static_cast<std::size_t>(std::countr_zero(mask))) = sub(c);
          }
          p = pullback_from_coframe(*model.cs, q);
          break;
        }
      }
      gens.push_back(std::move(p));
    }
    model.action.emplace(std::move(names), std::move(gens), m.bound);
  }

  if (m.torus_a) model.torus.emplace(*m.torus_a, m.torus_b);
  return model;
}

namespace report {

inline std::string str(const Form& f, int dim) { return f.to_string(real_names(dim)); }
inline std::string str(const BigradedForm& f) { return f.to_string(); }
inline std::string str(const Rational& r) { return r.get_str(); }

inline Json poly(const PoincarePoly& p, std::size_t len = 0) {
  Json a = Json::array();
  for (std::size_t k = 0; k < std::max(len, p.b.size()); ++k) a.push_back(p[k]);
  return a;
}

inline Json rationals(const std::vector<Rational>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(str(x));
  return a;
}

inline Json matrix_rows(const Matrix<Scalar>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string row;
    for (std::size_t k = 0; k < m.cols(); ++k) row += (k ? ", " : "") + m(i, k).to_string();
    a.push_back(row);
  }
  return a;
}

inline Json assignment(const std::map<std::string, Rational>& a) {
  Json o = Json::object();
  for (const auto& [k, v] : a) o[k] = str(v);
  return o;
}

inline Json header(const std::string& command, const std::string& manifest, const Model& model) {
  Json j;
  j["command"] = command;
  j["manifest"] = manifest;
  if (model.specialized) j["specialization"] = assignment(model.assignment);
  return j;
}

inline Json d_squared(const Model& model) {
  Json j;
  j["pass"] = model.d_squared.pass;
  if (!model.d_squared.pass) {
    j["generator"] = "e" + std::to_string(model.d_squared.generator + 1);
    j["witness"] = str(model.d_squared.witness, model.alg().dim());
  }
  return j;
}

}  // namespace report

// ---------------------------------------------------------------- commands

inline CommandResult cmd_validate(const Model& model, const std::string& name) {
  CommandResult r;
  Json& j = r.report = report::header("validate", name, model);
  const Algebra& alg = model.alg();
  const int dim = alg.dim();
  bool ok = true;

  Json algebra;
  algebra["dim"] = dim;
  Json diffs = Json::array();
  for (int k = 0; k < dim; ++k)
    if (!alg.differential(k).is_zero())
      diffs.push_back("d e" + std::to_string(k + 1) + " = " + report::str(alg.differential(k), dim));
  algebra["differentials"] = diffs;
  algebra["d_squared"] = report::d_squared(model);
  ok = ok && model.d_squared.pass;
  j["algebra"] = algebra;

  if (model.manifest.has_complex()) {
    Json c;
    if (!model.complex_error.empty()) {
      c["valid"] = false;
      c["error"] = model.complex_error;
      ok = false;
    } else if (model.d_squared.pass) {
      const ComplexStructure& cs = *model.cs;
      c["valid"] = true;
      Json coframe = Json::array(), dphi = Json::array();
      for (int a = 0; a < cs.n(); ++a) {
        const std::string nm = "phi" + std::to_string(a + 1);
        coframe.push_back(nm + " = " + report::str(cs.holomorphic_coframe()[static_cast<std::size_t>(a)], dim));
        dphi.push_back("d " + nm + " = " + report::str(cs.d(cs.phi(a))));
      }
      c["coframe"] = coframe;
      c["differentials"] = dphi;
      auto integ = cs.check_integrable();
      Json ij;
      ij["pass"] = integ.pass;
      if (!integ.pass) {
        ij["generator"] = "phi" + std::to_string(integ.index + 1);
        ij["obstruction_02"] = report::str(integ.obstruction);
      }
      c["integrable"] = ij;
      ok = ok && integ.pass;
    }
    j["complex"] = c;
  }

  if (model.action) {
    const GroupAction& act = *model.action;
    Json a;
    a["order"] = act.order();
    Json gens = Json::array();
    for (std::size_t g = 0; g < act.generators().size(); ++g) {
      Json gj;
      gj["name"] = act.names()[g];
      gj["element_order"] = act.element_order(act.generators()[g]);
      if (model.cs && model.complex_error.empty()) {
        Json table = Json::array();
        for (int k = 0; k < model.cs->n(); ++k) {
          const Form img = pullback(act.generators()[g], model.cs->holomorphic_coframe()[static_cast<std::size_t>(k)]);
          table.push_back(act.names()[g] + "* phi" + std::to_string(k + 1) + " = " +
                          report::str(model.cs->bigrade(img)));
        }
        gj["pullback"] = table;
      }
      gens.push_back(gj);
    }
    a["generators"] = gens;
    if (model.d_squared.pass) {
      const ComplexStructure* cs = model.cs && model.complex_error.empty() ? &*model.cs : nullptr;
      std::optional<Form> f;
      if (cs) f = model.hermitian().fundamental_form_real();
      const ActionCheck chk = check_action(act, alg, cs, f ? &*f : nullptr);
      a["automorphism"] = chk.automorphism;
      a["holomorphic"] = chk.holomorphic ? Json(*chk.holomorphic) : Json();
      a["isometric"] = chk.isometric ? Json(*chk.isometric) : Json();
      if (!chk.witness.empty()) a["witness"] = chk.witness;
      ok = ok && chk.automorphism && chk.holomorphic.value_or(true) && chk.isometric.value_or(true);
    }
    j["action"] = a;
  }

  if (model.torus) {
    Json t;
    t["n"] = model.torus->n();
    j["torusmap"] = t;
  }
  j["verdict"] = ok ? "pass" : "fail";
  r.exit_code = ok ? exit_ok : exit_check_failed;
  return r;
}

inline CommandResult cmd_classify(const Model& model, const std::string& name) {
  CommandResult r;
  Json& j = r.report = report::header("classify", name, model);
  const ComplexStructure& cs = model.complex();
  const HermitianMetric g = model.hermitian();
  const Classification c = classify(g, model.manifest.flip_lee);

  j["metric"] = model.metric ? report::matrix_rows(*model.metric) : Json("identity");
  j["fundamental_form"] = report::str(g.fundamental_form());
  const auto pd = g.is_positive_definite();
  j["positive_definite"] = pd ? Json(*pd) : Json();
  Json flags;
  flags["kahler"] = c.kahler;
  flags["skt"] = c.skt;
  flags["standard"] = c.standard;
  flags["balanced"] = c.balanced ? Json(*c.balanced) : Json();
  j["flags"] = flags;
  Json obs;
  obs["dF"] = report::str(c.df);
  obs["ddbar_F"] = report::str(c.ddbar_f);
  obs["ddbar_F^(n-1)"] = report::str(c.ddbar_fn1);
  if (c.theta) obs["theta"] = report::str(*c.theta, cs.real_algebra().dim());
  j["obstructions"] = obs;

  if (pd.value_or(false)) {
    try {
      const LeeData lee = lee_form(g, model.manifest.flip_lee);
      Json l;
      l["theta"] = report::str(lee.theta, cs.real_algebra().dim());
      l["|dF|^2"] = lee.df_norm2.to_string();
      l["|theta^F|^2"] = lee.theta_f_norm2.to_string();
      l["(n-1)|theta^F|^2"] = lee.rhs.to_string();
      l["norm_identity_holds"] = lee.identity_holds;
      l["sign_convention"] = model.manifest.flip_lee ? "flipped" : "default";
      j["lee"] = l;
    } catch (const InputError& e) {
      j["lee"] = Json{{"unavailable", e.what()}};
    }
  } else {
    j["lee"] = Json{{"unavailable", "needs a rational positive definite metric"}};
  }
  return r;
}

inline CommandResult cmd_cohomology(const Model& model, const std::string& name, bool invariant) {
  CommandResult r;
  Json& j = r.report = report::header(invariant ? "cohomology --invariant" : "cohomology", name, model);
  model.require_d_squared();
  const Algebra& alg = model.alg();
  if (!alg.has_constant_coefficients())
    throw InputError("cohomology needs constant structure coefficients; specialize the parameters (--set)");
  const auto len = static_cast<std::size_t>(alg.dim() + 1);
  const PoincarePoly b = betti(alg);
  j["betti"] = report::poly(b, len);
  j["euler_characteristic"] = b.euler_characteristic();
  bool duality = true;
  for (std::size_t k = 0; k < len; ++k) duality = duality && b[k] == b[len - 1 - k];
  j["poincare_duality"] = duality;
  if (invariant) {
    const GroupAction& act = model.group();
    const PoincarePoly ib = invariant_betti(alg, act);
    j["group_order"] = act.order();
    j["invariant_betti"] = report::poly(ib, len);
    if (ib[1] == 0)
      j["note"] = "invariant b1 = 0; simple connectivity of a resolution also needs an abelian orbifold fundamental group, "
                  "which is not computed here";
  }
  return r;
}

inline CommandResult cmd_fixed_points(const Model& model, const std::string& name) {
  CommandResult r;
  Json& j = r.report = report::header("fixed-points", name, model);
  if (!model.torus) throw InputError("the manifest has no [torusmap] section");
  const AffineTorusMap& map = *model.torus;
  const FixedPointSet fp = fixed_points(map);
  j["n"] = map.n();
  if (fp.empty) {
    j["count"] = 0;
    j["empty"] = true;
    return r;
  }
  j["dimension"] = fp.dimension;
  j["components"] = fp.components.get_str();
  if (fp.dimension == 0) j["count"] = fp.components.get_str();
  Json reps = Json::array();
  for (const auto& x : fp.representatives) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + report::str(x[i]);
    reps.push_back(s + ")");
  }
  j["representatives"] = reps;
  if (fp.truncated) j["truncated"] = true;
  return r;
}

inline Json constraint_rows(const ConstraintSystem& sys) {
  Json rows = Json::array();
  for (const auto& row : sys.rows) {
    Json rj;
    rj["label"] = row.label;
    Json coeffs = Json::object();
    for (std::size_t a = 0; a < sys.unknowns.size(); ++a)
      if (!row.coeffs[a].is_zero()) coeffs[sys.unknowns[a].name()] = row.coeffs[a].to_string();
    rj["coefficients"] = coeffs;
    rows.push_back(rj);
  }
  return rows;
}

inline Json verdict_json(const ConstraintSystem& sys, const FeasibilityVerdict& v, const ComplexStructure& cs,
                         std::uint64_t seed, bool& sound) {
  Json j;
  j["verdict"] = FeasibilityVerdict::kind_name(v.kind);
  sound = true;
  switch (v.kind) {
    case FeasibilityVerdict::Kind::feasible: {
      j["method"] = v.method;
      j["witness"] = report::matrix_rows(v.witness);
      j["minors"] = report::rationals(v.minors);
      const bool skt = classify(HermitianMetric(cs, v.witness)).skt;
      j["witness_skt"] = skt;
      sound = skt;
      break;
    }
    case FeasibilityVerdict::Kind::infeasible: {
      Json cert;
      if (v.zero_space) cert["solution_space"] = "{0}";
      cert["forced_zero"] = "H" + std::to_string(v.forced_zero + 1) + std::to_string(v.forced_zero + 1);
      cert["multipliers"] = report::rationals(v.multipliers);
      // y^T R must be the coordinate functional of H_jj
      const Matrix<Rational> rm = rational_matrix(sys);
      bool exact = v.multipliers.size() == rm.rows();
      for (std::size_t b = 0; exact && b < rm.cols(); ++b) {
        Rational acc(0);
        for (std::size_t a = 0; a < rm.rows(); ++a) acc += v.multipliers[a] * rm(a, b);
        const bool is_target = sys.unknowns[b].part == HermitianUnknown::Part::diagonal &&
                               sys.unknowns[b].j == v.forced_zero;
        exact = acc == Rational(is_target ? 1 : 0);
      }
      cert["residual_zero"] = exact;
      sound = exact;
      j["certificate"] = cert;
      j["note"] = "decides invariant metrics only";
      break;
    }
    default:
      j["trials_used"] = v.trials_used;
      break;
  }
  Json basis = Json::array();
  for (const auto& b : v.basis) {
    std::string s;
    for (std::size_t a = 0; a < b.size(); ++a)
      if (sgn(b[a]) != 0) s += (s.empty() ? "" : ", ") + sys.unknowns[a].name() + "=" + b[a].get_str();
    basis.push_back(s.empty() ? "0" : s);
  }
  j["solution_space_dim"] = v.basis.size();
  j["solution_space"] = basis;
  j["seed"] = std::to_string(seed);
  return j;
}

inline CommandResult cmd_skt_solve(const Model& model, const std::string& name, const RunOptions& opt) {
  CommandResult r;
  Json& j = r.report = report::header(opt.symbolic ? "skt-solve --symbolic" : "skt-solve", name, model);
  const ComplexStructure& cs = model.complex();
  const ConstraintSystem sys = extract_constraints(cs);
  j["unknowns"] = sys.unknowns.size();
  j["rows"] = constraint_rows(sys);
  j["constrained_unknowns"] = sys.constrained_unknowns();
  j["symbolic"] = sys.symbolic;
  if (sys.symbolic && !opt.symbolic)
    throw InputError("the constraints involve parameters; specialize them (--set) or pass --symbolic");
  if (sys.symbolic) {
    if (model.assignment.empty()) {
      j["verdict"] = "needs specialization";
      return r;
    }
    const ConstraintSystem spec = sys.specialized(cs.real_algebra().ring(), model.assignment);
    if (!spec.is_numeric()) throw InputError("not every parameter is specialized");
    const ComplexStructure scs = cs.specialized(cs.real_algebra().specialized(model.assignment), model.assignment);
    bool sound = true;
    j["specialization"] = report::assignment(model.assignment);
    j["result"] = verdict_json(spec, feasibility(spec, opt.trials, opt.seed), scs, opt.seed, sound);
    r.exit_code = sound ? exit_ok : exit_check_failed;
    return r;
  }
  bool sound = true;
  j["result"] = verdict_json(sys, feasibility(sys, opt.trials, opt.seed), cs, opt.seed, sound);
  r.exit_code = sound ? exit_ok : exit_check_failed;
  return r;
}

inline CommandResult cmd_blowup(const Model& model, const std::string& name) {
  CommandResult r;
  Json& j = r.report = report::header("blowup", name, model);
  if (!model.manifest.schedule) throw InputError("the manifest has no [schedule] section");
  const ScheduleSpec& s = *model.manifest.schedule;
  PoincarePoly start;
  switch (s.start) {
    case ScheduleSpec::Start::explicit_poly: start = s.start_poly; break;
    case ScheduleSpec::Start::betti:
    case ScheduleSpec::Start::invariant: {
      model.require_d_squared();
      if (!model.alg().has_constant_coefficients())
        throw InputError("the starting Betti numbers need constant structure coefficients (--set)");
      start = s.start == ScheduleSpec::Start::betti ? betti(model.alg()) : invariant_betti(model.alg(), model.group());
      break;
    }
  }
  if (start.degree() > 2 * s.ambient) throw InputError("starting polynomial has degree above 2 * ambient");
  const auto len = static_cast<std::size_t>(2 * s.ambient + 1);
  const ScheduleReport sr = resolve_schedule(start, s.steps);
  j["ambient"] = s.ambient;
  j["start"] = report::poly(start, len);
  Json steps = Json::array();
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    Json sj;
    const auto& st = s.steps[k];
    sj["kind"] = st.kind == BlowupStep::Kind::point ? "point" : "submanifold";
    if (st.kind == BlowupStep::Kind::submanifold) {
      sj["center_dim"] = st.center_dim;
      sj["center"] = report::poly(st.center);
    }
    sj["count"] = st.count;
    sj["contribution"] = report::poly(sr.contributions[k], len);
    sj["after"] = report::poly(sr.stages[k], len);
    steps.push_back(sj);
  }
  j["steps"] = steps;
  j["result"] = report::poly(sr.result, len);
  j["b0_b1_constant"] = sr.b0_b1_constant;
  if (!s.exceptional_b1.empty()) {
    long b1 = start[1];
    for (const auto& [e, count] : s.exceptional_b1) b1 += e * count;
    j["resolution_b1"] = b1;
  }
  r.exit_code = sr.b0_b1_constant ? exit_ok : exit_check_failed;
  return r;
}

// ---------------------------------------------------------------- dispatch

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& manifest_commands() {
  static const std::vector<std::string> c = {"validate", "classify", "cohomology", "fixed-points", "skt-solve", "blowup"};
  return c;
}

/// Run one manifest command. Input problems surface as InputError, failed
/// preconditions as CheckFailure; the caller maps them to exit codes.
inline CommandResult run_command(const std::string& command, const std::filesystem::path& path,
                                 const RunOptions& opt) {
  const Manifest m = parse_manifest(read_file(path));
  const std::string name = path.stem().string();
  const auto assignment = merged_assignment(m, opt.sets);
  const Model model = build_model(m, assignment, !(command == "skt-solve" && opt.symbolic));
  if (command == "validate") return cmd_validate(model, name);
  if (command == "classify") return cmd_classify(model, name);
  if (command == "cohomology") return cmd_cohomology(model, name, opt.invariant);
  if (command == "fixed-points") return cmd_fixed_points(model, name);
  if (command == "skt-solve") return cmd_skt_solve(model, name, opt);
  if (command == "blowup") return cmd_blowup(model, name);
  throw InputError("unknown command '" + command + "'");
}

/// Like run_command, but errors become error reports with their exit code.
inline CommandResult run_guarded(const std::string& command, const std::filesystem::path& path,
                                 const RunOptions& opt) {
  try {
    return run_command(command, path, opt);
  } catch (const CheckFailure& e) {
    CommandResult r;
    r.report["command"] = command;
    r.report["manifest"] = path.stem().string();
    r.report["error"] = e.what();
    if (!e.witness().empty()) r.report["witness"] = e.witness();
    r.exit_code = exit_check_failed;
    return r;
  } catch (const Error& e) {
    CommandResult r;
    r.report["command"] = command;
    r.report["manifest"] = path.stem().string();
    r.report["error"] = e.what();
    r.exit_code = exit_input_error;
    return r;
  }
}

// ---------------------------------------------------------------- paper suite

struct SuiteEntry {
  std::string id, manifest, command;
  RunOptions options;
};

inline std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::vector<SuiteEntry> parse_suite(const std::string& text) {
  std::vector<SuiteEntry> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto w = split_words(line);
    if (w.empty()) continue;
    if (w.size() < 3) throw InputError("suite line " + std::to_string(lineno) + ": expected 'id manifest command [flags]'");
    SuiteEntry e{w[0], w[1], w[2], {}};
    for (std::size_t k = 3; k < w.size(); ++k) {
      const std::string& f = w[k];
      auto value = [&]() -> const std::string& {
        if (k + 1 >= w.size()) throw InputError("suite line " + std::to_string(lineno) + ": " + f + " needs a value");
        return w[++k];
      };
      if (f == "--set") e.options.sets.push_back(value());
      else if (f == "--symbolic") e.options.symbolic = true;
      else if (f == "--invariant") e.options.invariant = true;
      else if (f == "--trials") e.options.trials = std::stoi(value());
      else if (f == "--seed") e.options.seed = std::stoull(value());
      else throw InputError("suite line " + std::to_string(lineno) + ": unknown flag '" + f + "'");
    }
    for (const auto& o : out)
      if (o.id == e.id) throw InputError("suite line " + std::to_string(lineno) + ": duplicate id '" + e.id + "'");
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string golden_text(const CommandResult& r) {
  Json g;
  g["exit_code"] = r.exit_code;
  g["report"] = r.report;
  return g.dump(2) + "\n";
}

inline std::string first_difference(const std::string& a, const std::string& b) {
  std::istringstream x(a), y(b);
  std::string la, lb;
  for (int line = 1;; ++line) {
    const bool ea = !std::getline(x, la), eb = !std::getline(y, lb);
    if (ea && eb) return "";
    if (ea || eb || la != lb)
      return "line " + std::to_string(line) + ": expected '" + (eb ? "<eof>" : lb) + "', got '" + (ea ? "<eof>" : la) + "'";
  }
}

/// Run every entry of <dir>/suite.txt and diff against <dir>/golden/<id>.json.
inline CommandResult run_paper_suite(const std::filesystem::path& dir, bool update_golden) {
  CommandResult r;
  r.report["command"] = "paper-suite";
  const auto entries = parse_suite(read_file(dir / "suite.txt"));
  Json results = Json::array();
  std::size_t passed = 0;
  for (const auto& e : entries) {
    const CommandResult cr = run_guarded(e.command, dir / (e.manifest + ".skt"), e.options);
    const std::string text = golden_text(cr);
    const auto gpath = dir / "golden" / (e.id + ".json");
    Json ej;
    ej["id"] = e.id;
    ej["exit_code"] = cr.exit_code;
    std::string status;
    if (update_golden) {
      std::filesystem::create_directories(gpath.parent_path());
      std::ofstream(gpath, std::ios::binary) << text;
      status = "updated";
    } else if (!std::filesystem::exists(gpath)) {
      status = "missing golden";
    } else {
      const std::string diff = first_difference(text, read_file(gpath));
      status = diff.empty() ? "match" : "mismatch";
      if (!diff.empty()) ej["diff"] = diff;
    }
    if (status == "match" || status == "updated") ++passed;
    ej["status"] = status;
    results.push_back(ej);
  }
  r.report["entries"] = results;
  r.report["passed"] = passed;
  r.report["total"] = entries.size();
  r.exit_code = passed == entries.size() ? exit_ok : exit_check_failed;
  return r;
}

// ---------------------------------------------------------------- text output

namespace detail {

inline std::string scalar_text(const Json& v) {
  if (v.is_null()) return "undetermined";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline bool is_flat(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (!x.is_number()) return false;
  return true;
}

inline void render(std::ostringstream& os, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_object() && !x.empty()) {
        os << pad << k << ":\n";
        render(os, x, indent + 2);
      } else if (x.is_array() && !is_flat(x)) {
        os << pad << k << ":" << (x.empty() ? " (none)" : "") << "\n";
        render(os, x, indent + 2);
      } else if (is_flat(x)) {
        os << pad << k << ": (";
        for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i].dump();
        os << ")\n";
      } else {
        os << pad << k << ": " << (x.is_object() ? "{}" : scalar_text(x)) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (x.is_object()) {
        os << pad << "-\n";
        render(os, x, indent + 2);
      } else {
        os << pad << "- " << scalar_text(x) << "\n";
      }
    }
  } else {
    os << pad << scalar_text(v) << "\n";
  }
}

}  // namespace detail

inline std::string render_text(const Json& report) {
  std::ostringstream os;
  detail::render(os, report, 0);
  return os.str();
}

inline std::string render(const Json& report, bool structured) {
  return structured ? report.dump(2) + "\n" : render_text(report);
}

}  // namespace sktwb
