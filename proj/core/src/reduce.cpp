#include "chred/reduce.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace chred {

Submanifold Submanifold::from_constraint(int ambient_dim, int codim,
                                         VectorFn c, MatrixFn jac,
                                         double fd_step) {
  if (codim < 0 || codim > ambient_dim)
    throw Error("submanifold: invalid codimension");
  Submanifold w;
  w.ambient_dim_ = ambient_dim;
  w.codim_ = codim;
  w.constraint_ = std::move(c);
  w.constraint_jac_ = std::move(jac);
  w.fd_step_ = fd_step;
  return w;
}

Submanifold Submanifold::from_parametrization(int ambient_dim, int param_dim,
                                              VectorFn p, MatrixFn jac,
                                              double fd_step) {
  Submanifold w;
  w.ambient_dim_ = ambient_dim;
  w.codim_ = ambient_dim - param_dim;
  w.param_dim_ = param_dim;
  w.param_ = std::move(p);
  w.param_jac_ = std::move(jac);
  w.fd_step_ = fd_step;
  return w;
}

Submanifold Submanifold::full_space(int ambient_dim) {
  Submanifold w;
  w.ambient_dim_ = ambient_dim;
  w.codim_ = 0;
  w.constraint_ = [](const Eigen::VectorXd&) { return Eigen::VectorXd(0); };
  w.constraint_jac_ = [ambient_dim](const Eigen::VectorXd&) {
    return Eigen::MatrixXd(0, ambient_dim);
  };
  return w;
}

Eigen::VectorXd Submanifold::constraint(const Eigen::VectorXd& z) const {
  if (!constraint_) throw Error("submanifold: no constraint representation");
  return constraint_(z);
}

Eigen::MatrixXd Submanifold::constraint_jacobian(const Eigen::VectorXd& z) const {
  if (!constraint_) throw Error("submanifold: no constraint representation");
  if (constraint_jac_) return constraint_jac_(z);
  if (codim_ == 0) return Eigen::MatrixXd(0, ambient_dim_);
  return central_jacobian(constraint_, z, fd_step_);
}

Eigen::VectorXd Submanifold::parametrize(const Eigen::VectorXd& u) const {
  if (!param_) throw Error("submanifold: no parametrization");
  return param_(u);
}

std::pair<Eigen::VectorXd, Subspace> Submanifold::point_and_tangent(
    const Eigen::VectorXd& u) const {
  if (!param_) throw Error("submanifold: no parametrization");
  Eigen::MatrixXd jac =
      param_jac_ ? param_jac_(u) : central_jacobian(param_, u, fd_step_);
  return {param_(u), Subspace::span(jac)};
}

bool Submanifold::contains(const Eigen::VectorXd& z, double memb_tol) const {
  if (codim_ == 0 && !constraint_) return true;
  return constraint(z).lpNorm<Eigen::Infinity>() < memb_tol;
}

Subspace Submanifold::tangent_at(const Eigen::VectorXd& z,
                                 double rank_tol) const {
  if (codim_ == 0) return Subspace::full(ambient_dim_);
  Eigen::MatrixXd jac = constraint_jacobian(z);
  // Nullspace of the Jacobian: rows span the conormal directions.
  Subspace row_span = Subspace::span(jac.transpose(), /*dual=*/true, rank_tol);
  Subspace normal = annihilator(row_span, rank_tol);
  return Subspace::span(normal.basis(), /*dual=*/false, rank_tol);
}

bool Submanifold::rank_deficient_at(const Eigen::VectorXd& z,
                                    double rank_tol) const {
  if (codim_ == 0) return false;
  Eigen::MatrixXd jac = constraint_jacobian(z);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() < codim_) return true;
  // An absolute floor catches points where the whole gradient collapses to
  // rounding noise (no well-defined normal direction).
  if (!(sv[0] > 1e-8)) return true;
  return !(sv[codim_ - 1] > rank_tol * sv[0]);
}

std::optional<Eigen::VectorXd> Submanifold::project(const Eigen::VectorXd& seed,
                                                    double memb_tol,
                                                    int max_iter) const {
  if (codim_ == 0) return seed;
  Eigen::VectorXd z = seed;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd c = constraint(z);
    if (c.lpNorm<Eigen::Infinity>() < memb_tol) return z;
    Eigen::MatrixXd jac = constraint_jacobian(z);
    Eigen::MatrixXd gram = jac * jac.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd step = jac.transpose() * ldlt.solve(c);
    if (!step.allFinite()) return std::nullopt;
    z -= step;
  }
  return constraint(z).lpNorm<Eigen::Infinity>() < memb_tol
             ? std::optional<Eigen::VectorXd>(z)
             : std::nullopt;
}

std::vector<Eigen::VectorXd> Submanifold::sample(Rng& rng, int count,
                                                 const Eigen::VectorXd& box_center,
                                                 double box_half_width,
                                                 double memb_tol) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  const int max_attempts = 20 * count + 100;
  for (int attempt = 0; attempt < max_attempts && (int)out.size() < count;
       ++attempt) {
    Eigen::VectorXd seed = rng.box_point(box_center, box_half_width);
    auto z = project(seed, memb_tol);
    if (z) out.push_back(*z);
  }
  return out;
}

Distribution Distribution::spanned(int ambient_dim,
                                   std::vector<VectorField> gens) {
  Distribution d;
  d.ambient_dim = ambient_dim;
  d.generators = std::move(gens);
  return d;
}

Distribution Distribution::zero(int ambient_dim) {
  return spanned(ambient_dim, {});
}

Subspace Distribution::fiber_at(const Eigen::VectorXd& z,
                                double rank_tol) const {
  if (generators.empty()) return Subspace::zero(ambient_dim);
  Eigen::MatrixXd cols(ambient_dim, generators.size());
  Eigen::Index kept = 0;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    Eigen::VectorXd v = generators[i].value(z);
    if (!v.allFinite())
      throw Error("distribution: generator value not finite");
    // Generator values at rounding level span nothing.
    if (v.norm() < 1e-12) continue;
    cols.col(kept++) = v;
  }
  return Subspace::span(cols.leftCols(kept), /*dual=*/false, rank_tol);
}

Subspace dw_fiber(const Distribution& d, const Submanifold& w,
                  const Eigen::VectorXd& z, double memb_tol) {
  if (!w.contains(z, memb_tol))
    throw Error("dw_fiber: point is off the submanifold");
  return subspace_intersect(d.fiber_at(z), w.tangent_at(z));
}

ReducibilityResult reducibility_check(const PoissonStructure& b,
                                      const Submanifold& w,
                                      const Distribution& d,
                                      const std::vector<Eigen::VectorXd>& points,
                                      double tol) {
  ReducibilityResult result;
  for (const auto& z : points) {
    if (w.rank_deficient_at(z)) {
      ++result.points_skipped;
      continue;
    }
    Subspace fiber = d.fiber_at(z);
    Subspace delta = annihilator(fiber);
    Subspace target = subspace_sum(w.tangent_at(z), fiber);
    Subspace image = sharp_image(b.at(z), delta);
    const double res = inclusion_residual(image, target);
    result.per_point.push_back({z, res});
    result.max_residual = std::max(result.max_residual, res);
    ++result.points_tested;
  }
  result.reducible = result.points_tested > 0 && result.max_residual < tol;
  return result;
}

std::string to_string(SubmanifoldClass c) {
  switch (c) {
    case SubmanifoldClass::coisotropic: return "coisotropic";
    case SubmanifoldClass::cosymplectic: return "cosymplectic";
    default: return "neither";
  }
}

SubmanifoldClass classify_point(const PoissonStructure& b,
                                const Eigen::VectorXd& z,
                                const Subspace& tangent,
                                const Subspace& leaf_tangent, double tol) {
  Subspace conormal = annihilator(tangent);
  Subspace image = sharp_image(b.at(z), conormal);
  if (inclusion_residual(image, tangent) < tol)
    return SubmanifoldClass::coisotropic;
  const bool trivial_meet = subspace_intersect(image, tangent).dim() == 0;
  const bool spans =
      subspace_sum(tangent, leaf_tangent).dim() == tangent.ambient_dim();
  if (trivial_meet && spans) return SubmanifoldClass::cosymplectic;
  return SubmanifoldClass::neither;
}

ClassifyResult classify_submanifold(
    const PoissonStructure& b, const Submanifold& w,
    const std::vector<Eigen::VectorXd>& points,
    const std::function<Subspace(const Eigen::VectorXd&)>& leaf_tangent_at,
    double tol) {
  ClassifyResult result;
  bool first = true;
  for (const auto& z : points) {
    if (w.rank_deficient_at(z)) {
      ++result.points_skipped;
      continue;
    }
    SubmanifoldClass c =
        classify_point(b, z, w.tangent_at(z), leaf_tangent_at(z), tol);
    result.per_point.push_back(c);
    if (first) {
      result.aggregate = c;
      first = false;
    } else if (c != result.aggregate) {
      result.mixed = true;
    }
  }
  if (result.mixed) result.aggregate = SubmanifoldClass::neither;
  return result;
}

Distribution characteristic_distribution(const PoissonStructure& b,
                                         const Submanifold& w) {
  if (!w.has_constraint())
    throw Error("characteristic_distribution: constraint representation required");
  std::vector<VectorField> gens;
  for (int i = 0; i < w.codim(); ++i) {
    gens.push_back(VectorField([b, w, i](const Eigen::VectorXd& z) {
      Eigen::VectorXd grad_ci = w.constraint_jacobian(z).row(i).transpose();
      return (b.at(z) * grad_ci).eval();
    }));
  }
  Distribution d = Distribution::spanned(b.dim, std::move(gens));
  d.claimed_poisson = true;
  return d;
}

ReducedBracketSample reduced_bracket_sample(
    const PoissonStructure& b, const Submanifold& w, const Distribution& d,
    const ScalarField& f_ext, const ScalarField& g_ext,
    const Eigen::VectorXd& m, const Eigen::VectorXd& m2,
    double invariance_tol, double memb_tol) {
  for (const auto* z : {&m, &m2}) {
    if (!w.contains(*z, memb_tol))
      throw Error("reduced_bracket_sample: point is off the submanifold");
    for (const auto& gen : d.generators) {
      Eigen::VectorXd v = gen.value(*z);
      for (const auto* f : {&f_ext, &g_ext}) {
        const double deriv = f->grad(*z).dot(v);
        if (std::abs(deriv) > invariance_tol)
          throw Error(
              "reduced_bracket_sample: extension is not invariant along the "
              "distribution (directional derivative = " +
              std::to_string(deriv) + ")");
      }
    }
  }
  ReducedBracketSample out;
  out.value_at_m = bracket_at(b, f_ext, g_ext, m);
  out.value_at_m2 = bracket_at(b, f_ext, g_ext, m2);
  out.independence_residual = std::abs(out.value_at_m - out.value_at_m2);
  return out;
}

InvolutivityResult involutivity_check(const Distribution& d,
                                      const std::vector<Eigen::VectorXd>& points,
                                      double tol) {
  if (d.generators.empty())
    throw Error("involutivity_check: needs at least one generator");
  InvolutivityResult result;
  for (std::size_t i = 0; i < d.generators.size(); ++i) {
    for (std::size_t j = i + 1; j < d.generators.size(); ++j) {
      VectorField br = lie_bracket(d.generators[i], d.generators[j]);
      for (const auto& z : points) {
        const double res = d.fiber_at(z).distance(br.value(z));
        result.worst_residual = std::max(result.worst_residual, res);
      }
    }
  }
  result.involutive = result.worst_residual < tol;
  return result;
}

int accessibility_rank(const VectorField& drift,
                       const std::vector<VectorField>& controls,
                       const Eigen::VectorXd& z, int depth, double rank_tol) {
  if (depth < 1) throw Error("accessibility_rank: depth must be >= 1");
  std::vector<VectorField> words;
  words.push_back(drift);
  for (const auto& g : controls) words.push_back(g);
  const std::size_t n_first = words.size();

  // Left-normalized brackets [w, X_j] reach every nesting level.
  std::size_t level_begin = 0;
  for (int level = 2; level <= depth; ++level) {
    const std::size_t level_end = words.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (std::size_t j = 0; j < n_first; ++j)
        if (i != j) words.push_back(lie_bracket(words[i], words[j]));
    level_begin = level_end;
  }

  Eigen::MatrixXd cols(z.size(), words.size());
  for (std::size_t i = 0; i < words.size(); ++i) cols.col(i) = words[i].value(z);
  return Subspace::span(cols, false, rank_tol).dim();
}

}  // namespace chred
