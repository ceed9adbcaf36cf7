#include "chred/catalog.hpp"

#include <array>
#include <utility>

#include "chred/subspace.hpp"

namespace chred {

namespace {

constexpr const char* kOscillatorControlled = R"json({
  "name": "oscillator_controlled",
  "seed": 7,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 2,
    "base_dim": 1,
    "hamiltonian": {"builtin": "isotropic"},
    "control_term": {"gain": [[-0.5]]}
  },
  "checks": [
    {"id": "antisymmetry", "tol": 1e-12},
    {"id": "jacobi", "tol": 1e-5},
    {"id": "simulate", "x0": [1.0, 0.0], "t_final": 6.283185307179586,
     "dt": 0.006283185307179586, "expect_final_state": [1.0, 0.0],
     "final_tol": 1e-8},
    {"id": "simulate", "x0": [1.0, 0.0], "t_final": 10.0, "dt": 0.001,
     "energy_drift_max": 1e-9, "export_csv": "oscillator_free.csv"},
    {"id": "simulate", "x0": [1.0, 0.0], "t_final": 10.0, "dt": 0.001,
     "method": "midpoint", "energy_drift_max": 1e-3},
    {"id": "simulate", "x0": [1.0, 0.0], "t_final": 20.0, "dt": 0.001,
     "use_control_term": true, "expect_energy_monotone": true},
    {"id": "accessibility", "controls": [[0.0, 1.0]], "depth": 2,
     "expect_rank": 2, "at_point": [0.3, 0.2]}
  ]
})json";

constexpr const char* kCoisotropicR4 = R"json({
  "name": "coisotropic_r4",
  "seed": 11,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 4,
    "base_dim": 2,
    "hamiltonian": {"builtin": "isotropic"},
    "control_subset": {"constraints": [{"builtin": "coordinate_zero", "index": 3}]},
    "distribution": {"builtin": "characteristic"}
  },
  "checks": [
    {"id": "reducibility", "tol": 1e-8},
    {"id": "classify", "expect": "coisotropic"},
    {"id": "dw_fiber", "expect_dim": 1},
    {"id": "involutivity", "expect": true},
    {"id": "reduced_bracket", "n_pairs": 20, "tol": 1e-7, "leaf_direction": 1,
     "function_pairs": [
       [{"builtin": "polynomial", "terms": [{"coeff": 1.0, "exponents": [1, 0, 0, 0]}]},
        {"builtin": "polynomial", "terms": [{"coeff": 1.0, "exponents": [0, 0, 1, 0]}]}],
       [{"builtin": "polynomial", "terms": [{"coeff": 1.0, "exponents": [2, 0, 0, 0]},
                                               {"coeff": 1.0, "exponents": [0, 0, 0, 1]}]},
        {"builtin": "polynomial", "terms": [{"coeff": 1.0, "exponents": [1, 0, 1, 0]}]}],
       [{"builtin": "polynomial", "terms": [{"coeff": 1.0, "exponents": [0, 0, 2, 0]}]},
        {"builtin": "polynomial", "terms": [{"coeff": 1.0, "exponents": [1, 0, 0, 0]}]}]
     ]}
  ]
})json";

constexpr const char* kCosymplecticR4 = R"json({
  "name": "cosymplectic_r4",
  "seed": 13,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 4,
    "base_dim": 2,
    "control_subset": {"constraints": [
      {"builtin": "coordinate_zero", "index": 1},
      {"builtin": "coordinate_zero", "index": 3}
    ]},
    "distribution": {"builtin": "characteristic"}
  },
  "checks": [
    {"id": "reducibility", "tol": 1e-8},
    {"id": "classify", "expect": "cosymplectic"},
    {"id": "dw_fiber", "expect_dim": 0}
  ]
})json";

constexpr const char* kCounterexampleR2 = R"json({
  "name": "counterexample_r2",
  "seed": 17,
  "samples": 50,
  "system": {
    "phase": "canonical",
    "dim": 2,
    "base_dim": 1,
    "control_subset": {"constraints": [{"builtin": "coordinate_zero", "index": 0}]},
    "distribution": {"builtin": "zero"}
  },
  "checks": [
    {"id": "reducibility", "tol": 1e-8}
  ]
})json";

constexpr const char* kCharacteristicCurvedR4 = R"json({
  "name": "characteristic_curved_r4",
  "seed": 19,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 4,
    "base_dim": 2,
    "control_subset": {"constraints": [
      {"builtin": "polynomial_level", "level": 0.0, "terms": [
        {"coeff": 1.0, "exponents": [0, 0, 0, 1]},
        {"coeff": -1.0, "exponents": [2, 0, 0, 0]}
      ]}
    ]},
    "distribution": {"builtin": "characteristic"}
  },
  "checks": [
    {"id": "reducibility", "tol": 1e-8},
    {"id": "classify", "expect": "coisotropic"},
    {"id": "involutivity", "expect": true}
  ]
})json";

constexpr const char* kMomentumFiberSo3 = R"json({
  "name": "momentum_fiber_so3",
  "seed": 23,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 6,
    "base_dim": 3,
    "hamiltonian": {"builtin": "isotropic"},
    "action": "so3"
  },
  "checks": [
    {"id": "momentum_fiber", "orbit_norm": 1.0, "expect": "coisotropic"},
    {"id": "momentum_fiber", "orbit_norm": 0.0, "expect": "singular"},
    {"id": "noether", "x0": [1.0, 0.2, -0.3, 0.1, 1.0, 0.4],
     "t_final": 10.0, "dt": 0.001, "tol": 1e-7},
    {"id": "stratify", "expect_strata": 3}
  ]
})json";

constexpr const char* kRigidBodyDamped = R"json({
  "name": "rigid_body_damped",
  "seed": 29,
  "samples": 100,
  "system": {
    "phase": "lie_poisson_so3",
    "dim": 3,
    "base_dim": 0,
    "hamiltonian": {"builtin": "rigid_body", "inertia": [1.0, 2.0, 3.0]},
    "control_term": {"gain": [[-0.1, 0.0, 0.0], [0.0, -0.1, 0.0], [0.0, 0.0, -0.1]]}
  },
  "checks": [
    {"id": "jacobi", "tol": 1e-5},
    {"id": "casimir", "function": {"builtin": "norm_squared"}, "tol": 1e-8},
    {"id": "simulate", "x0": [1.0, 0.01, 0.0], "t_final": 100.0, "dt": 0.001,
     "casimir_drift_max": 1e-8, "export_csv": "rigid_body_free.csv"},
    {"id": "simulate", "x0": [1.0, 0.5, 0.2], "t_final": 20.0, "dt": 0.001,
     "use_control_term": true, "expect_energy_monotone": true}
  ]
})json";

constexpr const char* kS1SingularReduction = R"json({
  "name": "s1_singular_reduction",
  "seed": 31,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 4,
    "base_dim": 2,
    "hamiltonian": {"builtin": "isotropic"},
    "action": "s1"
  },
  "checks": [
    {"id": "sigma_brackets", "tol": 1e-10},
    {"id": "stratify", "expect_strata": 2},
    {"id": "fixed_point_equivariance", "tol": 1e-8},
    {"id": "noether", "x0": [1.0, 0.0, 0.0, 1.0], "t_final": 10.0,
     "dt": 0.001, "tol": 1e-7}
  ]
})json";

constexpr const char* kCrosscheckS1 = R"json({
  "name": "crosscheck_s1",
  "seed": 37,
  "samples": 60,
  "system": {
    "phase": "canonical",
    "dim": 4,
    "base_dim": 2
  },
  "checks": [
    {"id": "crosscheck", "variant": "s1_free"}
  ]
})json";

constexpr const char* kCrosscheckRigidBody = R"json({
  "name": "crosscheck_rigid_body",
  "seed": 41,
  "samples": 60,
  "system": {
    "phase": "canonical",
    "dim": 6,
    "base_dim": 3
  },
  "checks": [
    {"id": "crosscheck", "variant": "rigid_body"}
  ]
})json";

constexpr const char* kOscillatorEquivPair = R"json({
  "name": "oscillator_equiv_pair",
  "seed": 43,
  "samples": 60,
  "system": {
    "phase": "canonical",
    "dim": 2,
    "base_dim": 1,
    "hamiltonian": {"builtin": "quadratic_form", "matrix": [[5.0, 0.0], [0.0, 0.25]]}
  },
  "checks": [
    {"id": "equivalence",
     "system2": {
       "phase": "canonical",
       "dim": 2,
       "base_dim": 1,
       "hamiltonian": {"builtin": "isotropic"}
     },
     "phi": "scale", "phi_factor": 2.0,
     "hm1_tol": 1e-8, "hm2_tol": 1e-8,
     "x02": [1.0, 0.0], "t_final": 10.0, "dt": 0.001,
     "conjugacy_tol": 1e-6, "zeroed_control_min": 0.1}
  ]
})json";

constexpr const char* kLiePoissonSo3Chart = R"json({
  "name": "lie_poisson_so3_chart",
  "seed": 47,
  "samples": 100,
  "system": {
    "phase": "canonical",
    "dim": 6,
    "base_dim": 3
  },
  "checks": [
    {"id": "lie_poisson", "tol": 1e-6}
  ]
})json";

constexpr const char* kTamperedJacobiR3 = R"json({
  "name": "tampered_jacobi_r3",
  "seed": 53,
  "samples": 100,
  "system": {
    "phase": "tampered_r3",
    "dim": 3,
    "base_dim": 0
  },
  "checks": [
    {"id": "antisymmetry", "tol": 1e-12},
    {"id": "jacobi", "expect_fail": true, "fail_threshold": 1e-2}
  ]
})json";

constexpr std::array<std::pair<const char*, const char*>, 13> kCatalog = {{
    {"oscillator_controlled", kOscillatorControlled},
    {"coisotropic_r4", kCoisotropicR4},
    {"cosymplectic_r4", kCosymplecticR4},
    {"counterexample_r2", kCounterexampleR2},
    {"characteristic_curved_r4", kCharacteristicCurvedR4},
    {"momentum_fiber_so3", kMomentumFiberSo3},
    {"rigid_body_damped", kRigidBodyDamped},
    {"s1_singular_reduction", kS1SingularReduction},
    {"crosscheck_s1", kCrosscheckS1},
    {"crosscheck_rigid_body", kCrosscheckRigidBody},
    {"oscillator_equiv_pair", kOscillatorEquivPair},
    {"lie_poisson_so3_chart", kLiePoissonSo3Chart},
    {"tampered_jacobi_r3", kTamperedJacobiR3},
}};

}  // namespace

std::vector<std::string> catalog_list() {
  std::vector<std::string> names;
  names.reserve(kCatalog.size());
  for (const auto& [name, text] : kCatalog) names.emplace_back(name);
  return names;
}

std::string catalog_json(const std::string& name) {
  for (const auto& [entry, text] : kCatalog)
    if (name == entry) return std::string(text) + "\n";
  throw Error("unknown catalog scenario '" + name + "'");
}

Scenario catalog_get(const std::string& name) {
  ParseResult parsed = parse_scenario(catalog_json(name));
  if (!parsed.ok()) {
    std::string message = "catalog scenario '" + name + "' failed to parse:";
    for (const auto& e : parsed.errors) message += "\n  " + e;
    throw Error(message);
  }
  return *parsed.scenario;
}

}  // namespace chred
