#pragma once

#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "virann/types.hpp"
#include "virann/virmod.hpp"

namespace virann {

// X = sum_n a_n l_n with l_n = z^{n+1} d/dz, |n| <= maxmode.
class VectorField {
 public:
  VectorField() : coeffs_(1, cplx(0.0)) {}
  explicit VectorField(int maxmode);

  static VectorField mode(int n, cplx a = 1.0);
  static VectorField from_modes(const std::vector<std::pair<int, cplx>>& modes);

  int maxmode() const { return maxmode_; }
  // Largest |n| with a nonzero coefficient (0 for the zero field).
  int support() const;

  cplx operator[](int n) const {
    return (n < -maxmode_ || n > maxmode_) ? cplx(0.0) : coeffs_[n + maxmode_];
  }
  // Grows the mode range when needed.
  cplx& at(int n);

  VectorField resized(int maxmode) const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(cplx s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(cplx s, VectorField a) { return a *= s; }
  friend VectorField operator*(VectorField a, cplx s) { return a *= s; }
  VectorField operator-() const { return (*this) * cplx(-1.0); }

  // max_n |a_n - b_n|
  double distance(const VectorField& o) const;

 private:
  int maxmode_ = 0;
  std::vector<cplx> coeffs_;
};

VectorField witt_bracket(const VectorField& X, const VectorField& Y);

// (c/12) sum_m (m^3 - m) a_m b_{-m}
cplx cocycle(const VectorField& X, const VectorField& Y, double c);

// sum_m (1+|m|)^t |a_m|
double field_norm(const VectorField& X, double t);

// b_m = conj(a_{-m}); pi(X)^* = pi(adjoint_field(X)).
VectorField adjoint_field(const VectorField& X);

// Samples of g with X = g(theta) d/dtheta, on theta_j = 2 pi j / G.
std::vector<cplx> to_theta(const VectorField& X, int G);
// Least-squares inverse of to_theta, truncated at maxmode.
VectorField from_theta(const std::vector<cplx>& g, int maxmode);

// max_j Re(sum_n a_n e^{i n theta_j}); <= 0 for inward fields.
double inward_margin(const VectorField& X, int G = 512);
bool is_inward(const VectorField& X, int G = 512, double tol = 1e-10);

struct QeiOptions {
  int G = 512;
  double gridtol = 1e-12;
  double inward_tol = 1e-10;
};

// (c/24) int_0^{2pi} (d/dtheta sqrt(Im g))^2 dtheta; throws NotInwardError.
double qei_bound(const VectorField& X, double c, const QeiOptions& opt = {});

// ||g_thetatheta||_{L^2(dtheta)} of the theta coefficient g.
double theta_curvature_norm(const VectorField& X);

// Dense sum_n a_n L_n; throws DomainError when maxmode exceeds the cutoff.
CMatrix pi_field(const VectorField& X, const ModuleData& module);
// out += pi(X) * in
void apply_field(const VectorField& X, const ModuleData& module, const CMatrix& in, CMatrix& out);
// Operator-norm bound sum_n |a_n| ||L_n|| restricted to the module.
double pi_norm_bound(const VectorField& X, const ModuleData& module);

enum class Interp { Linear, Constant };

namespace detail {

// Segments of a knot vector between jumps (or between all knots for constant data).
struct KnotLayout {
  std::vector<double> breaks;
  std::vector<int> first;
  Interp interp = Interp::Linear;
  int knot_count = 0;

  static KnotLayout build(const std::vector<double>& knots, Interp interp);
  int segment_of(double t) const;
  // Knot interval i and weight w of knot i+1 for t inside segment seg.
  std::pair<int, double> locate(const std::vector<double>& knots, double t, int seg) const;
};

void validate_knots(const std::vector<double>& knots, std::size_t values);

}  // namespace detail

// t -> X(t) sampled on knots 0 = t_0 <= ... <= t_K = 1.
//
// A knot may appear twice in a row; the path then jumps there and is
// right-continuous. Linear paths are continuous between jumps, constant paths
// hold fields[i] on [t_i, t_{i+1}).
class FieldPath {
 public:
  // The zero path.
  FieldPath() : FieldPath({0.0, 1.0}, {VectorField(), VectorField()}) {}
  FieldPath(std::vector<double> knots, std::vector<VectorField> fields, Interp interp = Interp::Linear);

  static FieldPath constant(const VectorField& X);
  static FieldPath zero(int maxmode = 0);

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<VectorField>& fields() const { return fields_; }
  Interp interp() const { return interp_; }
  int maxmode() const { return maxmode_; }
  int support() const;

  // Times where the path may be discontinuous, including 0 and 1.
  const std::vector<double>& breaks() const { return layout_.breaks; }
  int segment_count() const { return static_cast<int>(layout_.breaks.size()) - 1; }
  int segment_of(double t) const;

  // Right-continuous evaluation.
  VectorField at(double t) const;
  // Continuous extension of segment seg evaluated at t in [breaks[seg], breaks[seg+1]].
  VectorField at(double t, int seg) const;

  // t -> adjoint_field(X(1-t))
  FieldPath dagger() const;

  // sup over knots of max |a_n| differences; requires identical knots.
  double distance(const FieldPath& o) const;

 private:
  std::vector<double> knots_;
  std::vector<VectorField> fields_;
  Interp interp_ = Interp::Linear;
  int maxmode_ = 0;
  detail::KnotLayout layout_;
};

// sup_t inward margin, sampled at knots and midpoints.
double path_inward_margin(const FieldPath& path, int G = 512);

// max over knots and midpoints of qei_bound(X(t)).
double path_qei_rate(const FieldPath& path, double c, const QeiOptions& opt = {});

// Random inward field with modes |n| <= maxmode: Gaussian a_n ~ amplitude / n^2 and
// a_0 = -(sum |a_n| + damping + slack) + i rotation, slack uniform in [0, amplitude].
template <class Rng>
VectorField random_inward_field(int maxmode, Rng& rng, double amplitude = 0.2, double damping = 0.0);
// Linear path through pieces + 1 random inward fields on uniform knots.
template <class Rng>
FieldPath random_inward_path(int maxmode, Rng& rng, int pieces = 1, double amplitude = 0.2, double damping = 0.0);

nlohmann::json field_to_json(const VectorField& X);
VectorField field_from_json(const nlohmann::json& j);
nlohmann::json path_to_json(const FieldPath& p);
FieldPath path_from_json(const nlohmann::json& j);

}  // namespace virann

#include <random>

namespace virann {

template <class Rng>
VectorField random_inward_field(int maxmode, Rng& rng, double amplitude, double damping) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  VectorField X(maxmode);
  double mass = 0.0;
  for (int n = 1; n <= maxmode; ++n)
    for (int s : {n, -n}) {
      X.at(s) = cplx(gauss(rng), gauss(rng)) * (amplitude / (n * n));
      mass += std::abs(X[s]);
    }
  X.at(0) = cplx(-(mass + damping + amplitude * unif(rng)), amplitude * gauss(rng));
  return X;
}

template <class Rng>
FieldPath random_inward_path(int maxmode, Rng& rng, int pieces, double amplitude, double damping) {
  std::vector<double> knots;
  std::vector<VectorField> fields;
  for (int i = 0; i <= pieces; ++i) {
    knots.push_back(static_cast<double>(i) / pieces);
    fields.push_back(random_inward_field(maxmode, rng, amplitude, damping));
  }
  knots.back() = 1.0;
  return FieldPath(std::move(knots), std::move(fields));
}

}  // namespace virann
