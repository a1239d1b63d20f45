#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "virann/field.hpp"
#include "virann/types.hpp"

namespace virann {

// Samples h(theta_j, t_i) of a framing; row i is the curve at knot t_i.
// Row 0 is the incoming (inner) boundary, the last row the outgoing one.
class Framing {
 public:
  Framing() = default;
  Framing(std::vector<double> knots, CMatrix values);

  static Framing sample(const std::function<cplx(double, double)>& h, int G, int K);
  static Framing sample(const std::function<cplx(double, double)>& h, int G, std::vector<double> knots);
  // Straight-line interpolation (1-t) inner + t outer.
  static Framing linear(const CVector& inner, const CVector& outer, int K);

  int grid() const { return static_cast<int>(values_.cols()); }
  int knot_count() const { return static_cast<int>(knots_.size()); }
  const std::vector<double>& knots() const { return knots_; }
  const CMatrix& values() const { return values_; }

  CVector curve(int i) const { return values_.row(i).transpose(); }
  CVector in_curve() const { return curve(0); }
  CVector out_curve() const { return curve(knot_count() - 1); }

  bool sitting_start = false;
  bool sitting_end = false;

 private:
  std::vector<double> knots_;
  CMatrix values_;
};

struct PathOptions {
  int maxmode = 16;
  // Discarded l^1 mass allowed relative to the total.
  double tail_tol = 1e-8;
  double inward_tol = 1e-10;
  double min_htheta = 1e-8;
};

struct PathExtraction {
  FieldPath path;
  double max_tail_ratio = 0.0;
  double inward_margin = 0.0;
};

// X(t_i) = -h_t / h_theta with spectral theta-derivatives and sixth-order
// finite differences in t.
PathExtraction extract_path(const Framing& f, const PathOptions& opt = {});
FieldPath framing_path(const Framing& f, const PathOptions& opt = {});

struct FramingDiagnostics {
  double min_abs_htheta = 0.0;
  double min_jacobian = 0.0;
  int winding_in = 0;
  int winding_out = 0;
  double inward_margin = 0.0;
  double max_tail_ratio = 0.0;
  bool ok = false;
  std::vector<std::string> issues;
};

FramingDiagnostics validate_framing(const Framing& f, double tol = 1e-10, const PathOptions& opt = {});

struct AnnulusElement {
  FieldPath path = FieldPath::zero();
  cplx z = 1.0;
  std::optional<Framing> framing;
};

AnnulusElement element_from_framing(const Framing& f, cplx z = 1.0, const PathOptions& opt = {});

// Path (log q) l_0, framing q^{1-t} e^{i theta}.
AnnulusElement standard_element(cplx q, int G = 256, int K = 64);

AnnulusElement identity_element();

struct ComposeOptions {
  double boundary_tol = 1e-8;
  double sitting_width = 0.1;
};

// E2 is traversed first, then E1. Framed boundaries must agree up to a constant
// complex dilation, which is applied to the framing of E1.
AnnulusElement compose(const AnnulusElement& E1, const AnnulusElement& E2, const ComposeOptions& opt = {});

AnnulusElement dagger(const AnnulusElement& E);

// Reparametrize [0,1] onto [a,b] with X scaled by 1/(b-a); linear output.
FieldPath rescale_path(const FieldPath& p, double a, double b);
// Constant pieces become linear pieces joined by jumps.
FieldPath as_linear(const FieldPath& p);
// Concatenates linear paths already supported on consecutive subintervals.
FieldPath concatenate(const std::vector<std::pair<FieldPath, std::pair<double, double>>>& pieces);

class FramingHomotopy {
 public:
  FramingHomotopy() = default;
  FramingHomotopy(std::vector<double> u_knots, std::vector<Framing> slices);

  static FramingHomotopy sample(const std::function<cplx(double, double, double)>& h, int G, int K, int Ku);

  const std::vector<double>& u_knots() const { return u_knots_; }
  const std::vector<Framing>& slices() const { return slices_; }
  const Framing& front() const { return slices_.front(); }
  const Framing& back() const { return slices_.back(); }

 private:
  std::vector<double> u_knots_;
  std::vector<Framing> slices_;
};

struct CocycleQuadrature {
  cplx integral = 0.0;
  // Largest residual of d_t Y - d_u X - [X,Y] over the grid, in l-coefficients.
  double witt_residual = 0.0;
};

// Double integral over (t,u) of omega(h_t/h_theta, h_u/h_theta).
cplx homotopy_cocycle(const FramingHomotopy& H, double c, int maxmode = 16);
CocycleQuadrature homotopy_cocycle_detail(const FramingHomotopy& H, double c, int maxmode = 16);

// Counterclockwise arc {start + s : 0 <= s <= length}.
struct Arc {
  double start = 0.0;
  double length = 0.0;
  bool contains(double theta, double slack = 0.0) const;
};

struct ReferenceAnnulus {
  CVector in;
  CVector out;
  // Intermediate curve of the reference annulus; built from the partition of unity when absent.
  std::optional<CVector> delta;
};

ReferenceAnnulus round_reference(double r, int G);

struct PartitionOfUnity {
  std::vector<double> minus;
  std::vector<double> plus;
  std::vector<double> circ;
};

// minus == 1 off I2, plus == 1 off I1, with smooth ramps of the given width inside I1 and I2.
PartitionOfUnity bigon_partition(const Arc& I1, const Arc& I2, int G, double ramp);

struct BigonFactorization {
  CVector delta_A;
  // (delta_A, gamma_out), degenerate off I1
  Framing outer;
  // (gamma_in, delta_A), degenerate off I2
  Framing inner;
  PartitionOfUnity lambda;
  double nesting_margin = 0.0;
  double outer_pinch = 0.0;
  double inner_pinch = 0.0;
};

BigonFactorization bigon_factor(const CVector& gamma_in, const CVector& gamma_out, const Arc& I1, const Arc& I2,
                                const ReferenceAnnulus& ref, double ramp = 0.3, int K = 16);

// Signed distance-like margin: positive when p lies strictly inside the closed curve.
double inside_margin(const CVector& curve, cplx p);
int winding_number(const CVector& curve, cplx p);

nlohmann::json framing_to_json(const Framing& f);
Framing framing_from_json(const nlohmann::json& j);
nlohmann::json element_to_json(const AnnulusElement& E);
AnnulusElement element_from_json(const nlohmann::json& j, const PathOptions& opt = {});

}  // namespace virann
