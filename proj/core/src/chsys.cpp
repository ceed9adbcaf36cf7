#include "chred/chsys.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace chred {

FiberMap FiberMap::identity(int base_dim, int phase_dim) {
  FiberMap m;
  m.base_dim = base_dim;
  m.map_fn = [](const Eigen::VectorXd& x) { return x; };
  m.jac_fn = [phase_dim](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(phase_dim, phase_dim).eval();
  };
  return m;
}

FiberMap FiberMap::zero_section(int base_dim, int phase_dim) {
  FiberMap m;
  m.base_dim = base_dim;
  m.map_fn = [base_dim](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
    y.head(base_dim) = x.head(base_dim);
    return y;
  };
  m.jac_fn = [base_dim, phase_dim](const Eigen::VectorXd&) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(phase_dim, phase_dim);
    jac.topLeftCorner(base_dim, base_dim) =
        Eigen::MatrixXd::Identity(base_dim, base_dim);
    return jac;
  };
  return m;
}

FiberMap FiberMap::fiber_linear(int base_dim, const Eigen::MatrixXd& a) {
  const int fiber_dim = static_cast<int>(a.rows());
  const int phase_dim = base_dim + fiber_dim;
  FiberMap m;
  m.base_dim = base_dim;
  m.map_fn = [base_dim, a](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y.tail(x.size() - base_dim) = a * x.tail(x.size() - base_dim);
    return y;
  };
  m.jac_fn = [base_dim, fiber_dim, phase_dim, a](const Eigen::VectorXd&) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(phase_dim, phase_dim);
    jac.bottomRightCorner(fiber_dim, fiber_dim) = a;
    return jac;
  };
  return m;
}

FiberMap FiberMap::fiber_translation(int base_dim, const Eigen::VectorXd& c) {
  const int phase_dim = base_dim + static_cast<int>(c.size());
  FiberMap m;
  m.base_dim = base_dim;
  m.map_fn = [base_dim, c](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y.tail(c.size()) += c;
    return y;
  };
  m.jac_fn = [phase_dim](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(phase_dim, phase_dim).eval();
  };
  return m;
}

FiberPreservationResult is_fiber_preserving(
    const FiberMap& m, const std::vector<Eigen::VectorXd>& points, double tol) {
  FiberPreservationResult result;
  for (const auto& x : points) {
    Eigen::VectorXd y = m.apply(x);
    const double res =
        (y.head(m.base_dim) - x.head(m.base_dim)).lpNorm<Eigen::Infinity>();
    result.max_residual = std::max(result.max_residual, res);
  }
  result.fiber_preserving = result.max_residual < tol;
  return result;
}

Eigen::VectorXd vertical_lift(const FiberMap& m, const VectorField& x_field,
                              const Eigen::VectorXd& x, bool evaluate_at_image,
                              double fiber_tol) {
  Eigen::VectorXd image = m.apply(x);
  const double base_res =
      (image.head(m.base_dim) - x.head(m.base_dim)).lpNorm<Eigen::Infinity>();
  if (!(base_res < fiber_tol))
    throw Error("vertical_lift: map is not fiber-preserving at this point "
                "(base residual = " + std::to_string(base_res) + ")");
  Eigen::VectorXd pushed =
      evaluate_at_image ? (m.jacobian(image) * x_field.value(image)).eval()
                        : (m.jacobian(x) * x_field.value(x)).eval();
  Eigen::VectorXd lift = Eigen::VectorXd::Zero(x.size());
  lift.tail(x.size() - m.base_dim) = pushed.tail(x.size() - m.base_dim);
  return lift;
}

VectorField closed_loop_field(const CHSystem& sys,
                              const std::optional<FiberMap>& u,
                              bool evaluate_at_image) {
  const std::optional<FiberMap>& control = u ? u : sys.control_law;
  if (!control)
    throw Error("closed_loop_field: no control law supplied");
  VectorField xh = hamiltonian_field(sys.phase, sys.hamiltonian);
  const std::optional<FiberMap> force = sys.force;
  const std::optional<Submanifold> subset = sys.control_subset;
  const FiberMap u_map = *control;
  return VectorField(
      [xh, force, u_map, subset, evaluate_at_image](const Eigen::VectorXd& x) {
        if (subset && subset->has_constraint()) {
          // Values slightly off W are accepted when projectable back within
          // the clamp tolerance; anything farther is rejected.
          Eigen::VectorXd ux = u_map.apply(x);
          if (!subset->contains(ux, kMembTol)) {
            auto proj = subset->project(ux, kMembTol);
            if (!proj || (*proj - ux).norm() > 1e-6)
              throw Error("closed_loop_field: control value is off the "
                          "control subset");
          }
        }
        Eigen::VectorXd v = xh.value(x);
        if (force) v += vertical_lift(*force, xh, x, evaluate_at_image);
        v += vertical_lift(u_map, xh, x, evaluate_at_image);
        return v;
      });
}

VectorField open_loop_field(const CHSystem& sys, bool evaluate_at_image) {
  VectorField xh = hamiltonian_field(sys.phase, sys.hamiltonian);
  const std::optional<FiberMap> force = sys.force;
  if (!force) return xh;
  return VectorField([xh, force, evaluate_at_image](const Eigen::VectorXd& x) {
    return (xh.value(x) + vertical_lift(*force, xh, x, evaluate_at_image))
        .eval();
  });
}

VectorField closed_loop_field_with_term(const CHSystem& sys,
                                        const VectorField& vertical_term,
                                        bool evaluate_at_image) {
  VectorField drift = open_loop_field(sys, evaluate_at_image);
  const int base_dim = sys.base_dim;
  return VectorField([drift, vertical_term, base_dim](const Eigen::VectorXd& x) {
    Eigen::VectorXd term = vertical_term.value(x);
    if (base_dim > 0 &&
        term.head(base_dim).lpNorm<Eigen::Infinity>() > 1e-9)
      throw Error("closed_loop_field_with_term: control term is not vertical");
    return (drift.value(x) + term).eval();
  });
}

Trajectory integrate(const VectorField& x_field, const Eigen::VectorXd& x0,
                     double t_final, double dt, IntegrationMethod method) {
  if (!(dt > 0.0)) throw Error("integrate: dt must be positive");
  if (t_final < 0.0) throw Error("integrate: t_final must be nonnegative");
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  if (t_final == 0.0) return traj;

  const long n_steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
  Eigen::VectorXd x = x0;
  double t = 0.0;
  for (long step = 0; step < n_steps; ++step) {
    const double h = std::min(dt, t_final - t);
    if (method == IntegrationMethod::rk4) {
      Eigen::VectorXd k1 = x_field.value(x);
      Eigen::VectorXd k2 = x_field.value(x + 0.5 * h * k1);
      Eigen::VectorXd k3 = x_field.value(x + 0.5 * h * k2);
      Eigen::VectorXd k4 = x_field.value(x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      Eigen::VectorXd k1 = x_field.value(x);
      x += h * x_field.value(x + 0.5 * h * k1);
    }
    t += h;
    if (!x.allFinite())
      throw Error("integrate: state not finite at step " +
                  std::to_string(step + 1));
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

DiagnosticsReport diagnostics(const Trajectory& traj, const CHSystem& sys) {
  DiagnosticsReport report;
  report.casimirs.resize(sys.phase.declared_casimirs.size());
  for (const auto& x : traj.states) {
    report.energy.push_back(sys.hamiltonian.value(x));
    for (std::size_t c = 0; c < sys.phase.declared_casimirs.size(); ++c)
      report.casimirs[c].push_back(sys.phase.declared_casimirs[c].value(x));
  }
  if (report.energy.empty()) return report;
  const double e0 = report.energy.front();
  double prev = e0;
  for (double e : report.energy) {
    report.energy_drift_max = std::max(report.energy_drift_max, std::abs(e - e0));
    if (e > prev + 1e-12) report.energy_monotone_decreasing = false;
    prev = e;
  }
  for (const auto& series : report.casimirs) {
    const double c0 = series.front();
    for (double c : series)
      report.casimir_drift_max =
          std::max(report.casimir_drift_max, std::abs(c - c0));
  }
  return report;
}

namespace {
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string trajectory_csv(const Trajectory& traj, const CHSystem& sys) {
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= sys.phase_dim(); ++i) out << ",x" << i;
  out << ",H";
  for (std::size_t c = 0; c < sys.phase.declared_casimirs.size(); ++c)
    out << ",C" << (c + 1);
  out << "\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << fmt_double(traj.times[k]);
    for (int i = 0; i < sys.phase_dim(); ++i)
      out << "," << fmt_double(traj.states[k][i]);
    out << "," << fmt_double(sys.hamiltonian.value(traj.states[k]));
    for (const auto& casimir : sys.phase.declared_casimirs)
      out << "," << fmt_double(casimir.value(traj.states[k]));
    out << "\n";
  }
  return out.str();
}

std::string trajectory_json(const Trajectory& traj, const CHSystem& sys) {
  std::ostringstream out;
  auto emit_series = [&out](const char* key, const std::vector<double>& v) {
    out << "\"" << key << "\":[";
    for (std::size_t i = 0; i < v.size(); ++i)
      out << (i ? "," : "") << fmt_double(v[i]);
    out << "]";
  };
  DiagnosticsReport diag = diagnostics(traj, sys);
  out << "{";
  emit_series("t", traj.times);
  out << ",\"states\":[";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << (k ? "," : "") << "[";
    for (int i = 0; i < sys.phase_dim(); ++i)
      out << (i ? "," : "") << fmt_double(traj.states[k][i]);
    out << "]";
  }
  out << "],";
  emit_series("H", diag.energy);
  out << ",\"casimirs\":[";
  for (std::size_t c = 0; c < diag.casimirs.size(); ++c) {
    out << (c ? "," : "") << "[";
    for (std::size_t k = 0; k < diag.casimirs[c].size(); ++k)
      out << (k ? "," : "") << fmt_double(diag.casimirs[c][k]);
    out << "]";
  }
  out << "]}";
  return out.str();
}

}  // namespace chred
