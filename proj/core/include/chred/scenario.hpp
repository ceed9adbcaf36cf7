#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace chred {

/// One monomial of a polynomial in the ambient coordinates.
struct PolyTerm {
  double coeff = 0.0;
  std::vector<int> exponents;
};

/// Scalar-function builtin: the scenario format has no expression
/// interpreter, only a fixed library plus coefficient data.
struct FunctionSpec {
  enum class Kind {
    zero,
    isotropic,       // |x|^2 / 2
    quadratic_form,  // x^T A x / 2
    polynomial,
    rigid_body,      // sum mu_i^2 / (2 I_i)
    norm_squared     // |x|^2
  };
  Kind kind = Kind::zero;
  Eigen::MatrixXd matrix;
  std::vector<PolyTerm> terms;
  Eigen::VectorXd inertia;
};

struct ConstraintSpec {
  enum class Kind {
    coordinate_zero,        // x_i = 0
    linear_level,           // n . x = level
    polynomial_level,       // poly(x) = level
    s1_momentum,            // q1 p2 - q2 p1 = level   (phase dim 4)
    angular_momentum_norm2, // |q x p|^2 = level       (phase dim 6)
    casimir_level,          // |mu|^2 = level          (dim 3)
    body_momentum_casimir   // |bodymom(theta,pi)|^2 = level (chart dim 6)
  };
  Kind kind = Kind::coordinate_zero;
  int index = 0;
  Eigen::VectorXd normal;
  std::vector<PolyTerm> terms;
  double level = 0.0;
};

struct SubmanifoldSpec {
  std::vector<ConstraintSpec> constraints;
};

struct DistributionSpec {
  enum class Kind { zero, characteristic, coordinate_fields, constant_fields,
                    group_generators };
  Kind kind = Kind::zero;
  std::vector<int> indices;
  std::vector<Eigen::VectorXd> vectors;
};

struct ForceSpec {
  enum class Kind { zero_section, fiber_linear, fiber_translation };
  Kind kind = Kind::zero_section;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd offset;
};

/// Vertical control contribution (0, gain * x_fiber + offset).
struct ControlTermSpec {
  Eigen::MatrixXd gain;
  Eigen::VectorXd offset;
};

enum class PhaseKindSpec { canonical, lie_poisson_so3, s1_invariants, tampered_r3 };
enum class ActionSpec { none, trivial, s1, so3 };

struct SystemSpec {
  PhaseKindSpec phase = PhaseKindSpec::canonical;
  int dim = 0;
  int base_dim = 0;
  std::optional<FunctionSpec> hamiltonian;
  std::optional<ForceSpec> force;
  std::optional<SubmanifoldSpec> control_subset;
  std::optional<DistributionSpec> distribution;
  std::optional<ControlTermSpec> control_term;
  ActionSpec action = ActionSpec::none;
  // Comparison switch: evaluate vertical lifts at the image point of the
  // fiber map instead of at the base point (the two coincide for the
  // identity map).
  bool vlift_at_image = false;
};

// --- per-check parameter blocks -------------------------------------------

struct AntisymmetryCheckSpec {
  double tol = 1e-12;
};
struct JacobiCheckSpec {
  double tol = 1e-5;
  bool expect_fail = false;
  double fail_threshold = 1e-2;
};
struct CasimirCheckSpec {
  FunctionSpec function;
  double tol = 1e-8;
};
struct CharacteristicIdentityCheckSpec {
  int n_subspaces = 50;
  std::string leaf = "full";  // "full" | "so3_sphere"
  double tol = 1e-8;
};
struct ReducibilityCheckSpec {
  double tol = 1e-8;
};
struct ClassifyCheckSpec {
  std::string expect = "coisotropic";
  double tol = 1e-8;
};
struct DwFiberCheckSpec {
  int expect_dim = 0;
};
struct InvolutivityCheckSpec {
  bool expect = true;
  double tol = 1e-6;
};
struct AccessibilityCheckSpec {
  int depth = 2;
  int expect_rank = 0;
  std::vector<Eigen::VectorXd> control_vectors;
  Eigen::VectorXd at_point;
};
struct SimulateCheckSpec {
  Eigen::VectorXd x0;
  double t_final = 1.0;
  double dt = 1e-3;
  std::string method = "rk4";
  bool use_control_term = false;
  std::optional<double> energy_drift_max;
  std::optional<double> casimir_drift_max;
  bool expect_energy_monotone = false;
  std::optional<Eigen::VectorXd> expect_final_state;
  double final_tol = 1e-8;
  std::optional<std::string> export_csv;
};
struct ReducedBracketCheckSpec {
  int n_pairs = 20;
  double tol = 1e-7;
  int leaf_direction = 0;  // coordinate index the D_W leaves run along
  std::vector<std::pair<FunctionSpec, FunctionSpec>> function_pairs;
};
struct EquivalenceCheckSpec {
  SystemSpec system2;
  std::string phi = "identity";  // "identity" | "scale"
  double phi_factor = 1.0;
  double hm1_tol = 1e-8;
  double hm2_tol = 1e-8;
  Eigen::VectorXd x02;
  double t_final = 10.0;
  double dt = 1e-3;
  double conjugacy_tol = 1e-6;
  double zeroed_control_min = 1e-1;
};
struct LiePoissonCheckSpec {
  double tol = 1e-6;
};
struct SigmaBracketCheckSpec {
  double tol = 1e-10;
};
struct StratifyCheckSpec {
  int expect_strata = 1;
  bool include_special_points = true;
};
struct MomentumFiberCheckSpec {
  double orbit_norm = 1.0;
  std::string expect = "coisotropic";  // or "singular"
  double tol = 1e-8;
};
struct NoetherCheckSpec {
  Eigen::VectorXd x0;
  double t_final = 10.0;
  double dt = 1e-3;
  double tol = 1e-7;
};
struct FixedPointEquivarianceCheckSpec {
  double tol = 1e-8;
};
struct CrosscheckCheckSpec {
  std::string variant = "s1_free";  // "s1_free" | "rigid_body"
};

using CheckSpec =
    std::variant<AntisymmetryCheckSpec, JacobiCheckSpec, CasimirCheckSpec,
                 CharacteristicIdentityCheckSpec, ReducibilityCheckSpec,
                 ClassifyCheckSpec, DwFiberCheckSpec, InvolutivityCheckSpec,
                 AccessibilityCheckSpec, SimulateCheckSpec,
                 ReducedBracketCheckSpec, EquivalenceCheckSpec,
                 LiePoissonCheckSpec, SigmaBracketCheckSpec, StratifyCheckSpec,
                 MomentumFiberCheckSpec, NoetherCheckSpec,
                 FixedPointEquivarianceCheckSpec, CrosscheckCheckSpec>;

const char* check_id(const CheckSpec& spec);

struct SampleBoxSpec {
  Eigen::VectorXd center;  // empty means origin
  double half_width = 1.0;
};

struct ToleranceSpec {
  double residual = 1e-8;
  double membership = 1e-10;
  double fd_step = 1e-5;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  int samples = 100;
  SampleBoxSpec box;
  ToleranceSpec tolerances;
  SystemSpec system;
  std::vector<CheckSpec> checks;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<std::string> errors;  // "path: message" entries

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

/// Validates and decodes a scenario document (JSON). All builtins must
/// exist, dimensions must be consistent and a seed is mandatory.
ParseResult parse_scenario(const std::string& text);

}  // namespace chred
