#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "virann/field.hpp"
#include "virann/types.hpp"
#include "virann/virmod.hpp"

namespace virann {

// t -> A(t) on [0,1], continuous on each segment [breaks[i], breaks[i+1]].
// Evaluation on a segment uses that segment's continuous extension, so a
// solver stepping up to a break sees the left limit.
class GeneratorPath {
 public:
  virtual ~GeneratorPath() = default;

  virtual int dim() const = 0;
  virtual const std::vector<double>& breaks() const = 0;
  // out = A(t) * in
  virtual void apply(double t, int seg, const CMatrix& in, CMatrix& out) const = 0;
  // out = A(t)^* * in
  virtual void apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const = 0;
  virtual CMatrix matrix(double t, int seg) const;

  int segment_count() const { return static_cast<int>(breaks().size()) - 1; }
  // Right-continuous segment lookup.
  int segment_of(double t) const;
};

// Dense matrices on knots, linear or piecewise-constant in t.
class MatrixPath final : public GeneratorPath {
 public:
  MatrixPath(std::vector<double> knots, std::vector<CMatrix> mats, Interp interp = Interp::Linear);
  static MatrixPath constant(const CMatrix& a);

  int dim() const override { return dim_; }
  const std::vector<double>& breaks() const override { return layout_.breaks; }
  void apply(double t, int seg, const CMatrix& in, CMatrix& out) const override;
  void apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const override;
  CMatrix matrix(double t, int seg) const override;

 private:
  std::vector<double> knots_;
  std::vector<CMatrix> mats_;
  Interp interp_;
  int dim_ = 0;
  detail::KnotLayout layout_;
};

namespace detail {

// Distinct knots of a path and, for each interval between them, the path segment it lies in.
struct SmoothPieces {
  std::vector<double> breaks;
  std::vector<int> segment;
};
SmoothPieces smooth_pieces(const FieldPath& path);

}  // namespace detail

// A(t) = pi(X(t)) on a truncated module, applied level block by level block.
// Solver segments run between consecutive distinct knots.
class FieldGenerator final : public GeneratorPath {
 public:
  // Keeps references; path and module must outlive the generator.
  FieldGenerator(const FieldPath& path, const ModuleData& module);

  int dim() const override { return module_.total_dim(); }
  const std::vector<double>& breaks() const override { return pieces_.breaks; }
  void apply(double t, int seg, const CMatrix& in, CMatrix& out) const override;
  void apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const override;
  CMatrix matrix(double t, int seg) const override;

  const FieldPath& path() const { return path_; }
  const ModuleData& module() const { return module_; }

 private:
  const FieldPath& path_;
  const ModuleData& module_;
  detail::SmoothPieces pieces_;
};

// B(t) = A(1-t)^*
class ReversedAdjointPath final : public GeneratorPath {
 public:
  explicit ReversedAdjointPath(const GeneratorPath& base);

  int dim() const override { return base_.dim(); }
  const std::vector<double>& breaks() const override { return breaks_; }
  void apply(double t, int seg, const CMatrix& in, CMatrix& out) const override;
  void apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const override;

 private:
  const GeneratorPath& base_;
  std::vector<double> breaks_;
};

struct EvolutionResult {
  CMatrix U;
  double s = 0.0;
  double t = 0.0;
  long steps = 0;
  long rejected = 0;
  double errest = 0.0;
  std::string method;
};

struct OdeOptions {
  double tol = 1e-10;
  double min_step = 1e-14;
  long max_steps = 2000000;
};

// Product exp(d A(tau_{n-1})) ... exp(d A(tau_0)), d = (t-s)/n, left endpoints.
EvolutionResult piecewise_exp(const GeneratorPath& path, double s, double t, int n);

// Dormand-Prince 5(4) for U' = A(t) U, U(s) = I.
EvolutionResult ode_exp(const GeneratorPath& path, double s, double t, double tol = 1e-10);

// U(t,s) * Y0 by the same integrator.
EvolutionResult propagate(const GeneratorPath& path, double s, double t, const CMatrix& Y0, const OdeOptions& opt = {});

// ||U(t,r) U(r,s) - U(t,s)||
double flow_residual(const GeneratorPath& path, double s, double r, double t, double tol = 1e-10);

// max over (s,t) pairs of || Utilde(t,s) - U(1-s,1-t)^* || with Utilde generated by A(1-t)^*.
double adjoint_evolution_check(const GeneratorPath& path, double tol = 1e-10,
                               const std::vector<std::pair<double, double>>& pairs = {{0.0, 1.0}, {0.2, 0.7}, {0.5, 0.9}});

using PathFamily = std::function<std::unique_ptr<GeneratorPath>(double)>;

struct DerivativeComparison {
  CMatrix integral;
  CMatrix finite_difference;
  double difference = 0.0;
};

// Integral formula int_0^1 U(1,x) dA/dp(x) U(x,0) dx against (U_{p+d} - U_{p-d}) / 2d.
DerivativeComparison parameter_derivative(const PathFamily& family, double p, double delta, double tol = 1e-11,
                                          int panels = 16);

struct GrowthReport {
  // max over samples of ||U(t,s)v|| - e^{omega (t-s)} ||v||
  double max_margin = -INFINITY;
  int samples = 0;
};

// Columns of vectors are the test vectors.
GrowthReport growth_bound_check(const GeneratorPath& path, double omega, const std::vector<std::pair<double, double>>& pairs,
                                const CMatrix& vectors, double tol = 1e-10);

nlohmann::json evolution_to_json(const EvolutionResult& r);

}  // namespace virann
