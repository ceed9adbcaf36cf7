#include "chred/scenario.hpp"

#include <nlohmann/json.hpp>

namespace chred {

using json = nlohmann::json;

namespace {

class Parser {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& message) {
    errors.push_back(path + ": " + message);
  }

  Eigen::VectorXd vector(const json& j, const std::string& path) {
    Eigen::VectorXd v(j.size());
    int i = 0;
    for (const auto& entry : j) {
      if (!entry.is_number()) {
        fail(path, "expected a numeric array");
        return Eigen::VectorXd();
      }
      v[i++] = entry.get<double>();
    }
    return v;
  }

  Eigen::MatrixXd matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
      fail(path, "expected an array of rows");
      return Eigen::MatrixXd();
    }
    const std::size_t cols = j.front().size();
    Eigen::MatrixXd m(j.size(), cols);
    int r = 0;
    for (const auto& row : j) {
      if (row.size() != cols) {
        fail(path, "ragged matrix rows");
        return Eigen::MatrixXd();
      }
      int c = 0;
      for (const auto& entry : row) m(r, c++) = entry.get<double>();
      ++r;
    }
    return m;
  }

  std::vector<PolyTerm> poly_terms(const json& j, const std::string& path) {
    std::vector<PolyTerm> terms;
    if (!j.is_array()) {
      fail(path, "expected an array of {coeff, exponents} terms");
      return terms;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& t = j[i];
      const std::string tpath = path + "/" + std::to_string(i);
      if (!t.contains("coeff") || !t.contains("exponents")) {
        fail(tpath, "term needs coeff and exponents");
        continue;
      }
      PolyTerm term;
      term.coeff = t["coeff"].get<double>();
      for (const auto& e : t["exponents"]) term.exponents.push_back(e.get<int>());
      terms.push_back(std::move(term));
    }
    return terms;
  }

  FunctionSpec function(const json& j, const std::string& path, int dim) {
    FunctionSpec f;
    const std::string builtin = j.value("builtin", "");
    if (builtin == "zero") {
      f.kind = FunctionSpec::Kind::zero;
    } else if (builtin == "isotropic") {
      f.kind = FunctionSpec::Kind::isotropic;
    } else if (builtin == "norm_squared") {
      f.kind = FunctionSpec::Kind::norm_squared;
    } else if (builtin == "quadratic_form") {
      f.kind = FunctionSpec::Kind::quadratic_form;
      f.matrix = matrix(j.value("matrix", json::array()), path + "/matrix");
      if (f.matrix.rows() != dim || f.matrix.cols() != dim)
        fail(path + "/matrix", "matrix must be " + std::to_string(dim) + "x" +
                                   std::to_string(dim));
    } else if (builtin == "polynomial") {
      f.kind = FunctionSpec::Kind::polynomial;
      f.terms = poly_terms(j.value("terms", json::array()), path + "/terms");
      for (const auto& t : f.terms)
        if ((int)t.exponents.size() != dim)
          fail(path + "/terms", "exponent vectors must have length " +
                                    std::to_string(dim));
    } else if (builtin == "rigid_body") {
      f.kind = FunctionSpec::Kind::rigid_body;
      f.inertia = vector(j.value("inertia", json::array()), path + "/inertia");
      if (f.inertia.size() != 3) fail(path + "/inertia", "expected 3 inertia values");
    } else {
      fail(path + "/builtin", "unknown function builtin '" + builtin + "'");
    }
    return f;
  }

  ConstraintSpec constraint(const json& j, const std::string& path, int dim) {
    ConstraintSpec c;
    const std::string builtin = j.value("builtin", "");
    c.level = j.value("level", 0.0);
    if (builtin == "coordinate_zero") {
      c.kind = ConstraintSpec::Kind::coordinate_zero;
      c.index = j.value("index", -1);
      if (c.index < 0 || c.index >= dim)
        fail(path + "/index", "coordinate index out of range");
    } else if (builtin == "linear_level") {
      c.kind = ConstraintSpec::Kind::linear_level;
      c.normal = vector(j.value("normal", json::array()), path + "/normal");
      if (c.normal.size() != dim)
        fail(path + "/normal", "normal must have the ambient dimension");
    } else if (builtin == "polynomial_level") {
      c.kind = ConstraintSpec::Kind::polynomial_level;
      c.terms = poly_terms(j.value("terms", json::array()), path + "/terms");
      for (const auto& t : c.terms)
        if ((int)t.exponents.size() != dim)
          fail(path + "/terms", "exponent vectors must have length " +
                                    std::to_string(dim));
    } else if (builtin == "s1_momentum") {
      c.kind = ConstraintSpec::Kind::s1_momentum;
      if (dim != 4) fail(path, "s1_momentum requires phase dimension 4");
    } else if (builtin == "angular_momentum_norm2") {
      c.kind = ConstraintSpec::Kind::angular_momentum_norm2;
      if (dim != 6) fail(path, "angular_momentum_norm2 requires phase dimension 6");
    } else if (builtin == "casimir_level") {
      c.kind = ConstraintSpec::Kind::casimir_level;
      if (dim != 3) fail(path, "casimir_level requires dimension 3");
    } else if (builtin == "body_momentum_casimir") {
      c.kind = ConstraintSpec::Kind::body_momentum_casimir;
      if (dim != 6) fail(path, "body_momentum_casimir requires chart dimension 6");
    } else {
      fail(path + "/builtin", "unknown constraint builtin '" + builtin + "'");
    }
    return c;
  }

  SystemSpec system(const json& j, const std::string& path) {
    SystemSpec s;
    const std::string phase = j.value("phase", "canonical");
    if (phase == "canonical") s.phase = PhaseKindSpec::canonical;
    else if (phase == "lie_poisson_so3") s.phase = PhaseKindSpec::lie_poisson_so3;
    else if (phase == "s1_invariants") s.phase = PhaseKindSpec::s1_invariants;
    else if (phase == "tampered_r3") s.phase = PhaseKindSpec::tampered_r3;
    else fail(path + "/phase", "unknown phase kind '" + phase + "'");

    s.dim = j.value("dim", 0);
    if (s.dim <= 0) fail(path + "/dim", "dim must be positive");
    if (s.phase == PhaseKindSpec::canonical && s.dim % 2 != 0)
      fail(path + "/dim", "canonical phase needs even dimension");
    if (s.phase == PhaseKindSpec::lie_poisson_so3 && s.dim != 3)
      fail(path + "/dim", "lie_poisson_so3 is 3-dimensional");
    if (s.phase == PhaseKindSpec::s1_invariants && s.dim != 4)
      fail(path + "/dim", "s1_invariants is 4-dimensional");
    if (s.phase == PhaseKindSpec::tampered_r3 && s.dim != 3)
      fail(path + "/dim", "tampered_r3 is 3-dimensional");

    s.base_dim = j.value("base_dim",
                         s.phase == PhaseKindSpec::canonical ? s.dim / 2 : 0);
    if (s.base_dim < 0 || s.base_dim > s.dim)
      fail(path + "/base_dim", "base_dim out of range");

    if (j.contains("hamiltonian"))
      s.hamiltonian = function(j["hamiltonian"], path + "/hamiltonian", s.dim);

    if (j.contains("force")) {
      const auto& jf = j["force"];
      const std::string fpath = path + "/force";
      ForceSpec f;
      const std::string builtin = jf.value("builtin", "");
      const int fiber_dim = s.dim - s.base_dim;
      if (builtin == "zero_section") {
        f.kind = ForceSpec::Kind::zero_section;
      } else if (builtin == "fiber_linear") {
        f.kind = ForceSpec::Kind::fiber_linear;
        f.matrix = matrix(jf.value("matrix", json::array()), fpath + "/matrix");
        if (f.matrix.rows() != fiber_dim || f.matrix.cols() != fiber_dim)
          fail(fpath + "/matrix", "matrix must act on the fiber");
      } else if (builtin == "fiber_translation") {
        f.kind = ForceSpec::Kind::fiber_translation;
        f.offset = vector(jf.value("offset", json::array()), fpath + "/offset");
        if (f.offset.size() != fiber_dim)
          fail(fpath + "/offset", "offset must have the fiber dimension");
      } else {
        fail(fpath + "/builtin", "unknown force builtin '" + builtin + "'");
      }
      s.force = std::move(f);
    }

    if (j.contains("control_subset")) {
      SubmanifoldSpec w;
      const auto& jw = j["control_subset"];
      const auto& jc = jw.value("constraints", json::array());
      for (std::size_t i = 0; i < jc.size(); ++i)
        w.constraints.push_back(constraint(
            jc[i], path + "/control_subset/constraints/" + std::to_string(i),
            s.dim));
      s.control_subset = std::move(w);
    }

    if (j.contains("distribution")) {
      DistributionSpec d;
      const auto& jd = j["distribution"];
      const std::string dpath = path + "/distribution";
      const std::string builtin = jd.value("builtin", "");
      if (builtin == "zero") d.kind = DistributionSpec::Kind::zero;
      else if (builtin == "characteristic") {
        d.kind = DistributionSpec::Kind::characteristic;
        if (!s.control_subset)
          fail(dpath, "characteristic distribution needs a control subset");
      } else if (builtin == "coordinate_fields") {
        d.kind = DistributionSpec::Kind::coordinate_fields;
        for (const auto& idx : jd.value("indices", json::array())) {
          const int i = idx.get<int>();
          if (i < 0 || i >= s.dim) fail(dpath + "/indices", "index out of range");
          d.indices.push_back(i);
        }
      } else if (builtin == "constant_fields") {
        d.kind = DistributionSpec::Kind::constant_fields;
        const auto& jv = jd.value("vectors", json::array());
        for (std::size_t i = 0; i < jv.size(); ++i) {
          Eigen::VectorXd v =
              vector(jv[i], dpath + "/vectors/" + std::to_string(i));
          if (v.size() != s.dim)
            fail(dpath + "/vectors", "vectors must have the ambient dimension");
          d.vectors.push_back(std::move(v));
        }
      } else if (builtin == "group_generators") {
        d.kind = DistributionSpec::Kind::group_generators;
      } else {
        fail(dpath + "/builtin", "unknown distribution builtin '" + builtin + "'");
      }
      s.distribution = std::move(d);
    }

    if (j.contains("control_term")) {
      ControlTermSpec t;
      const auto& jt = j["control_term"];
      const int fiber_dim = s.dim - s.base_dim;
      t.gain = matrix(jt.value("gain", json::array()), path + "/control_term/gain");
      if (t.gain.rows() != fiber_dim || t.gain.cols() != fiber_dim)
        fail(path + "/control_term/gain", "gain must act on the fiber");
      if (jt.contains("offset")) {
        t.offset = vector(jt["offset"], path + "/control_term/offset");
        if (t.offset.size() != fiber_dim)
          fail(path + "/control_term/offset", "offset must have the fiber dimension");
      } else {
        t.offset = Eigen::VectorXd::Zero(fiber_dim);
      }
      s.control_term = std::move(t);
    }

    s.vlift_at_image = j.value("vlift_at_image", false);

    if (j.contains("action")) {
      const std::string action = j["action"].get<std::string>();
      if (action == "trivial") s.action = ActionSpec::trivial;
      else if (action == "s1") {
        s.action = ActionSpec::s1;
        if (s.dim != 4) fail(path + "/action", "s1 acts on phase dimension 4");
      } else if (action == "so3") {
        s.action = ActionSpec::so3;
        if (s.dim != 6) fail(path + "/action", "so3 acts on phase dimension 6");
      } else {
        fail(path + "/action", "unknown action '" + action + "'");
      }
    }
    return s;
  }

  CheckSpec check(const json& j, const std::string& path, const SystemSpec& sys,
                  bool& ok) {
    ok = true;
    const std::string id = j.value("id", "");
    if (id == "antisymmetry") {
      AntisymmetryCheckSpec c;
      c.tol = j.value("tol", c.tol);
      return c;
    }
    if (id == "jacobi") {
      JacobiCheckSpec c;
      c.tol = j.value("tol", c.tol);
      c.expect_fail = j.value("expect_fail", false);
      c.fail_threshold = j.value("fail_threshold", c.fail_threshold);
      return c;
    }
    if (id == "casimir") {
      CasimirCheckSpec c;
      if (j.contains("function"))
        c.function = function(j["function"], path + "/function", sys.dim);
      else
        fail(path, "casimir check needs a function");
      c.tol = j.value("tol", c.tol);
      return c;
    }
    if (id == "characteristic_identity") {
      CharacteristicIdentityCheckSpec c;
      c.n_subspaces = j.value("n_subspaces", c.n_subspaces);
      c.leaf = j.value("leaf", c.leaf);
      c.tol = j.value("tol", c.tol);
      if (c.leaf != "full" && c.leaf != "so3_sphere")
        fail(path + "/leaf", "unknown leaf model '" + c.leaf + "'");
      return c;
    }
    if (id == "reducibility") {
      ReducibilityCheckSpec c;
      c.tol = j.value("tol", c.tol);
      if (!sys.control_subset) fail(path, "reducibility needs a control subset");
      if (!sys.distribution) fail(path, "reducibility needs a distribution");
      return c;
    }
    if (id == "classify") {
      ClassifyCheckSpec c;
      c.expect = j.value("expect", c.expect);
      c.tol = j.value("tol", c.tol);
      if (!sys.control_subset) fail(path, "classify needs a control subset");
      return c;
    }
    if (id == "dw_fiber") {
      DwFiberCheckSpec c;
      c.expect_dim = j.value("expect_dim", 0);
      if (!sys.control_subset || !sys.distribution)
        fail(path, "dw_fiber needs a control subset and a distribution");
      return c;
    }
    if (id == "involutivity") {
      InvolutivityCheckSpec c;
      c.expect = j.value("expect", true);
      c.tol = j.value("tol", c.tol);
      if (!sys.distribution) fail(path, "involutivity needs a distribution");
      return c;
    }
    if (id == "accessibility") {
      AccessibilityCheckSpec c;
      c.depth = j.value("depth", c.depth);
      c.expect_rank = j.value("expect_rank", 0);
      for (const auto& v : j.value("controls", json::array()))
        c.control_vectors.push_back(vector(v, path + "/controls"));
      if (j.contains("at_point"))
        c.at_point = vector(j["at_point"], path + "/at_point");
      if (!sys.hamiltonian) fail(path, "accessibility needs a hamiltonian");
      return c;
    }
    if (id == "simulate") {
      SimulateCheckSpec c;
      if (!j.contains("x0")) fail(path, "simulate needs x0");
      else c.x0 = vector(j["x0"], path + "/x0");
      if (c.x0.size() != sys.dim && j.contains("x0"))
        fail(path + "/x0", "x0 must have the phase dimension");
      c.t_final = j.value("t_final", c.t_final);
      c.dt = j.value("dt", c.dt);
      c.method = j.value("method", c.method);
      if (c.method != "rk4" && c.method != "midpoint")
        fail(path + "/method", "method must be rk4 or midpoint");
      c.use_control_term = j.value("use_control_term", false);
      if (c.use_control_term && !sys.control_term)
        fail(path, "use_control_term requires a system control_term");
      if (j.contains("energy_drift_max"))
        c.energy_drift_max = j["energy_drift_max"].get<double>();
      if (j.contains("casimir_drift_max"))
        c.casimir_drift_max = j["casimir_drift_max"].get<double>();
      c.expect_energy_monotone = j.value("expect_energy_monotone", false);
      if (j.contains("expect_final_state"))
        c.expect_final_state =
            vector(j["expect_final_state"], path + "/expect_final_state");
      c.final_tol = j.value("final_tol", c.final_tol);
      if (j.contains("export_csv"))
        c.export_csv = j["export_csv"].get<std::string>();
      if (!sys.hamiltonian) fail(path, "simulate needs a hamiltonian");
      return c;
    }
    if (id == "reduced_bracket") {
      ReducedBracketCheckSpec c;
      c.n_pairs = j.value("n_pairs", c.n_pairs);
      c.tol = j.value("tol", c.tol);
      c.leaf_direction = j.value("leaf_direction", 0);
      if (c.leaf_direction < 0 || c.leaf_direction >= sys.dim)
        fail(path + "/leaf_direction", "coordinate index out of range");
      for (const auto& pair : j.value("function_pairs", json::array())) {
        if (!pair.is_array() || pair.size() != 2) {
          fail(path + "/function_pairs", "each entry must be a [f, g] pair");
          continue;
        }
        c.function_pairs.emplace_back(
            function(pair[0], path + "/function_pairs", sys.dim),
            function(pair[1], path + "/function_pairs", sys.dim));
      }
      if (c.function_pairs.empty())
        fail(path + "/function_pairs", "at least one function pair required");
      if (!sys.control_subset || !sys.distribution)
        fail(path, "reduced_bracket needs a control subset and a distribution");
      return c;
    }
    if (id == "equivalence") {
      EquivalenceCheckSpec c;
      if (!j.contains("system2")) fail(path, "equivalence needs system2");
      else c.system2 = system(j["system2"], path + "/system2");
      c.phi = j.value("phi", c.phi);
      if (c.phi != "identity" && c.phi != "scale")
        fail(path + "/phi", "phi must be identity or scale");
      c.phi_factor = j.value("phi_factor", c.phi_factor);
      c.hm1_tol = j.value("hm1_tol", c.hm1_tol);
      c.hm2_tol = j.value("hm2_tol", c.hm2_tol);
      if (j.contains("x02")) c.x02 = vector(j["x02"], path + "/x02");
      else fail(path, "equivalence needs x02");
      c.t_final = j.value("t_final", c.t_final);
      c.dt = j.value("dt", c.dt);
      c.conjugacy_tol = j.value("conjugacy_tol", c.conjugacy_tol);
      c.zeroed_control_min = j.value("zeroed_control_min", c.zeroed_control_min);
      return c;
    }
    if (id == "lie_poisson") {
      LiePoissonCheckSpec c;
      c.tol = j.value("tol", c.tol);
      if (sys.dim != 6) fail(path, "lie_poisson runs on the 6-dim chart");
      return c;
    }
    if (id == "sigma_brackets") {
      SigmaBracketCheckSpec c;
      c.tol = j.value("tol", c.tol);
      if (sys.dim != 4) fail(path, "sigma_brackets runs on phase dimension 4");
      return c;
    }
    if (id == "stratify") {
      StratifyCheckSpec c;
      c.expect_strata = j.value("expect_strata", 1);
      c.include_special_points = j.value("include_special_points", true);
      if (sys.action == ActionSpec::none) fail(path, "stratify needs an action");
      return c;
    }
    if (id == "momentum_fiber") {
      MomentumFiberCheckSpec c;
      c.orbit_norm = j.value("orbit_norm", c.orbit_norm);
      c.expect = j.value("expect", c.expect);
      c.tol = j.value("tol", c.tol);
      if (sys.action == ActionSpec::none)
        fail(path, "momentum_fiber needs an action");
      return c;
    }
    if (id == "noether") {
      NoetherCheckSpec c;
      if (!j.contains("x0")) fail(path, "noether needs x0");
      else c.x0 = vector(j["x0"], path + "/x0");
      c.t_final = j.value("t_final", c.t_final);
      c.dt = j.value("dt", c.dt);
      c.tol = j.value("tol", c.tol);
      if (sys.action == ActionSpec::none) fail(path, "noether needs an action");
      if (!sys.hamiltonian) fail(path, "noether needs a hamiltonian");
      return c;
    }
    if (id == "fixed_point_equivariance") {
      FixedPointEquivarianceCheckSpec c;
      c.tol = j.value("tol", c.tol);
      if (sys.action == ActionSpec::none)
        fail(path, "fixed_point_equivariance needs an action");
      return c;
    }
    if (id == "crosscheck") {
      CrosscheckCheckSpec c;
      c.variant = j.value("variant", c.variant);
      if (c.variant != "s1_free" && c.variant != "rigid_body")
        fail(path + "/variant", "unknown crosscheck variant '" + c.variant + "'");
      return c;
    }
    fail(path + "/id", "unknown check id '" + id + "'");
    ok = false;
    return AntisymmetryCheckSpec{};
  }
};

}  // namespace

const char* check_id(const CheckSpec& spec) {
  struct Visitor {
    const char* operator()(const AntisymmetryCheckSpec&) { return "antisymmetry"; }
    const char* operator()(const JacobiCheckSpec&) { return "jacobi"; }
    const char* operator()(const CasimirCheckSpec&) { return "casimir"; }
    const char* operator()(const CharacteristicIdentityCheckSpec&) {
      return "characteristic_identity";
    }
    const char* operator()(const ReducibilityCheckSpec&) { return "reducibility"; }
    const char* operator()(const ClassifyCheckSpec&) { return "classify"; }
    const char* operator()(const DwFiberCheckSpec&) { return "dw_fiber"; }
    const char* operator()(const InvolutivityCheckSpec&) { return "involutivity"; }
    const char* operator()(const AccessibilityCheckSpec&) { return "accessibility"; }
    const char* operator()(const SimulateCheckSpec&) { return "simulate"; }
    const char* operator()(const ReducedBracketCheckSpec&) {
      return "reduced_bracket";
    }
    const char* operator()(const EquivalenceCheckSpec&) { return "equivalence"; }
    const char* operator()(const LiePoissonCheckSpec&) { return "lie_poisson"; }
    const char* operator()(const SigmaBracketCheckSpec&) { return "sigma_brackets"; }
    const char* operator()(const StratifyCheckSpec&) { return "stratify"; }
    const char* operator()(const MomentumFiberCheckSpec&) {
      return "momentum_fiber";
    }
    const char* operator()(const NoetherCheckSpec&) { return "noether"; }
    const char* operator()(const FixedPointEquivarianceCheckSpec&) {
      return "fixed_point_equivariance";
    }
    const char* operator()(const CrosscheckCheckSpec&) { return "crosscheck"; }
  };
  return std::visit(Visitor{}, spec);
}

ParseResult parse_scenario(const std::string& text) {
  ParseResult result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(std::string("/: ") + e.what());
    return result;
  }

  Parser parser;
  Scenario scenario;
  if (!doc.contains("name") || !doc["name"].is_string())
    parser.fail("/name", "scenario name required");
  else
    scenario.name = doc["name"].get<std::string>();

  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned())
    parser.fail("/seed", "a nonnegative integer seed is required");
  else
    scenario.seed = doc["seed"].get<std::uint64_t>();

  scenario.samples = doc.value("samples", 100);
  if (scenario.samples <= 0) parser.fail("/samples", "samples must be positive");

  if (doc.contains("box")) {
    const auto& jb = doc["box"];
    if (jb.contains("center"))
      scenario.box.center = parser.vector(jb["center"], "/box/center");
    scenario.box.half_width = jb.value("half_width", 1.0);
    if (!(scenario.box.half_width > 0.0))
      parser.fail("/box/half_width", "half_width must be positive");
  }

  if (doc.contains("tolerances")) {
    const auto& jt = doc["tolerances"];
    scenario.tolerances.residual = jt.value("residual", 1e-8);
    scenario.tolerances.membership = jt.value("membership", 1e-10);
    scenario.tolerances.fd_step = jt.value("fd_step", 1e-5);
  }

  if (!doc.contains("system")) {
    parser.fail("/system", "system section required");
  } else {
    scenario.system = parser.system(doc["system"], "/system");
  }

  if (scenario.box.center.size() != 0 &&
      scenario.box.center.size() != scenario.system.dim)
    parser.fail("/box/center", "center must have the phase dimension");

  const auto& jchecks = doc.value("checks", json::array());
  for (std::size_t i = 0; i < jchecks.size(); ++i) {
    bool ok = true;
    CheckSpec spec = parser.check(jchecks[i], "/checks/" + std::to_string(i),
                                  scenario.system, ok);
    if (ok) scenario.checks.push_back(std::move(spec));
  }

  result.errors = std::move(parser.errors);
  if (result.errors.empty()) result.scenario = std::move(scenario);
  return result;
}

}  // namespace chred
