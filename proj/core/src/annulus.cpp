#include "virann/annulus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "virann/fourier.hpp"
#include "virann/json_io.hpp"

namespace virann {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fornberg weights for the first derivative at x0 on the given nodes.
std::vector<double> first_derivative_weights(double x0, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

// Stencil of up to seven neighbouring knots around i.
std::pair<int, int> stencil(int i, int K) {
  const int width = std::min(7, K);
  int lo = i - width / 2;
  lo = std::clamp(lo, 0, K - width);
  return {lo, lo + width};
}

std::vector<double> time_weights(const std::vector<double>& knots, int i, int& lo) {
  auto [a, b] = stencil(i, static_cast<int>(knots.size()));
  lo = a;
  std::vector<double> xs(knots.begin() + a, knots.begin() + b);
  return first_derivative_weights(knots[i], xs);
}

std::vector<cplx> row_samples(const CMatrix& values, int i) {
  std::vector<cplx> s(values.cols());
  for (Eigen::Index j = 0; j < values.cols(); ++j) s[j] = values(i, j);
  return s;
}

// Full l-coefficients of -ht / htheta, plus l^1 masses.
struct Extracted {
  VectorField field;
  double tail = 0.0;
  double total = 0.0;
  double min_htheta = INFINITY;
};

Extracted extract_field(const std::vector<cplx>& h, const std::vector<cplx>& ht, int maxmode) {
  const int G = static_cast<int>(h.size());
  auto hth = fourier::derivative(h);
  std::vector<cplx> g(G);
  Extracted out;
  for (int j = 0; j < G; ++j) {
    out.min_htheta = std::min(out.min_htheta, std::abs(hth[j]));
    g[j] = -ht[j] / hth[j];
  }
  const int full = (G - 1) / 2;
  VectorField X = from_theta(g, full);
  for (int n = -full; n <= full; ++n) {
    const double a = std::abs(X[n]);
    out.total += a;
    if (std::abs(n) > maxmode) out.tail += a;
  }
  out.field = X.resized(std::min(maxmode, full));
  return out;
}

std::vector<double> uniform_knots(int K) {
  if (K < 1) throw DomainError("need at least one time interval");
  std::vector<double> k(K + 1);
  for (int i = 0; i <= K; ++i) k[i] = static_cast<double>(i) / K;
  k.back() = 1.0;
  return k;
}

// Composite Simpson weights on uniform knots, trapezoid when the count is even.
std::vector<double> quadrature_weights(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> w(n, 0.0);
  if (n == 1) return w;
  const double h = (x.back() - x.front()) / (n - 1);
  if ((n - 1) % 2 == 0) {
    for (int i = 0; i < n; ++i) w[i] = h / 3.0 * ((i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0));
  } else {
    for (int i = 0; i + 1 < n; ++i) {
      const double d = x[i + 1] - x[i];
      w[i] += 0.5 * d;
      w[i + 1] += 0.5 * d;
    }
  }
  return w;
}

double wrap(double t) {
  double r = std::fmod(t, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

// Angular distance from theta to the arc (0 inside).
double arc_distance(const Arc& arc, double theta) {
  if (arc.contains(theta)) return 0.0;
  const double s = wrap(theta - arc.start);
  return std::min(s - arc.length, kTwoPi - s);
}

Arc complement(const Arc& a) { return Arc{wrap(a.start + a.length), kTwoPi - a.length}; }

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double s = len2 > 0 ? std::real((p - a) * std::conj(d)) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

}  // namespace

// ---------------------------------------------------------------------------

Framing::Framing(std::vector<double> knots, CMatrix values) : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2) throw DomainError("Framing: need at least two knots");
  if (static_cast<Eigen::Index>(knots_.size()) != values_.rows()) throw DomainError("Framing: knot count differs from rows");
  if (knots_.front() != 0.0 || knots_.back() != 1.0) throw DomainError("Framing: knots must run from 0 to 1");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw DomainError("Framing: knots must be strictly increasing");
  if (values_.cols() < 3) throw DomainError("Framing: theta grid too small");
}

Framing Framing::sample(const std::function<cplx(double, double)>& h, int G, int K) {
  return sample(h, G, uniform_knots(K));
}

Framing Framing::sample(const std::function<cplx(double, double)>& h, int G, std::vector<double> knots) {
  CMatrix v(static_cast<Eigen::Index>(knots.size()), G);
  for (std::size_t i = 0; i < knots.size(); ++i)
    for (int j = 0; j < G; ++j) v(static_cast<Eigen::Index>(i), j) = h(fourier::grid_point(j, G), knots[i]);
  return Framing(std::move(knots), std::move(v));
}

Framing Framing::linear(const CVector& inner, const CVector& outer, int K) {
  if (inner.size() != outer.size()) throw DomainError("Framing::linear: curves have different grids");
  auto knots = uniform_knots(K);
  CMatrix v(K + 1, inner.size());
  for (int i = 0; i <= K; ++i) v.row(i) = ((1.0 - knots[i]) * inner + knots[i] * outer).transpose();
  return Framing(std::move(knots), std::move(v));
}

PathExtraction extract_path(const Framing& f, const PathOptions& opt) {
  const int K = f.knot_count();
  std::vector<VectorField> fields;
  fields.reserve(K);
  PathExtraction out;
  out.inward_margin = -INFINITY;
  for (int i = 0; i < K; ++i) {
    int lo = 0;
    auto w = time_weights(f.knots(), i, lo);
    CVector ht = CVector::Zero(f.grid());
    for (std::size_t s = 0; s < w.size(); ++s) ht += w[s] * f.curve(lo + static_cast<int>(s));
    std::vector<cplx> htv(ht.data(), ht.data() + ht.size());
    auto ex = extract_field(row_samples(f.values(), i), htv, opt.maxmode);
    if (ex.min_htheta < opt.min_htheta)
      throw DomainError("framing_path: |h_theta| = " + std::to_string(ex.min_htheta) + " at knot " + std::to_string(i));
    const double ratio = ex.total > 0 ? ex.tail / ex.total : 0.0;
    out.max_tail_ratio = std::max(out.max_tail_ratio, ratio);
    out.inward_margin = std::max(out.inward_margin, inward_margin(ex.field, std::max(512, 4 * opt.maxmode + 4)));
    fields.push_back(std::move(ex.field));
  }
  if (out.max_tail_ratio > opt.tail_tol)
    throw DomainError("framing_path: discarded mode tail " + std::to_string(out.max_tail_ratio) + " exceeds tolerance");
  if (out.inward_margin > opt.inward_tol)
    throw NotInwardError("framing_path: extracted field is not inward (margin " + std::to_string(out.inward_margin) + ")",
                         out.inward_margin);
  out.path = FieldPath(f.knots(), std::move(fields), Interp::Linear);
  return out;
}

FieldPath framing_path(const Framing& f, const PathOptions& opt) { return extract_path(f, opt).path; }

FramingDiagnostics validate_framing(const Framing& f, double tol, const PathOptions& opt) {
  FramingDiagnostics d;
  d.min_abs_htheta = INFINITY;
  d.min_jacobian = INFINITY;
  d.inward_margin = -INFINITY;
  const int K = f.knot_count();
  for (int i = 0; i < K; ++i) {
    auto h = row_samples(f.values(), i);
    auto hth = fourier::derivative(h);
    int lo = 0;
    auto w = time_weights(f.knots(), i, lo);
    CVector ht = CVector::Zero(f.grid());
    for (std::size_t s = 0; s < w.size(); ++s) ht += w[s] * f.curve(lo + static_cast<int>(s));
    for (int j = 0; j < f.grid(); ++j) {
      d.min_abs_htheta = std::min(d.min_abs_htheta, std::abs(hth[j]));
      d.min_jacobian = std::min(d.min_jacobian, std::imag(hth[j] * std::conj(ht[j])));
    }
    if (d.min_abs_htheta >= opt.min_htheta) {
      std::vector<cplx> htv(ht.data(), ht.data() + ht.size());
      auto ex = extract_field(h, htv, opt.maxmode);
      d.max_tail_ratio = std::max(d.max_tail_ratio, ex.total > 0 ? ex.tail / ex.total : 0.0);
      d.inward_margin = std::max(d.inward_margin, inward_margin(ex.field, std::max(512, 4 * opt.maxmode + 4)));
    }
  }
  // Winding about the centroid of the curve.
  auto wind = [](const CVector& c) { return winding_number(c, c.mean()); };
  d.winding_in = wind(f.in_curve());
  d.winding_out = wind(f.out_curve());

  if (d.min_abs_htheta < opt.min_htheta) d.issues.push_back("pinched curve: min |h_theta| = " + std::to_string(d.min_abs_htheta));
  if (d.min_jacobian < -tol) d.issues.push_back("negative Jacobian: " + std::to_string(d.min_jacobian));
  if (d.winding_in != 1 || d.winding_out != 1) d.issues.push_back("boundary winding number is not +1");
  if (d.inward_margin > tol) d.issues.push_back("extracted field not inward: margin " + std::to_string(d.inward_margin));
  if (d.max_tail_ratio > opt.tail_tol) d.issues.push_back("mode tail too large: " + std::to_string(d.max_tail_ratio));
  d.ok = d.issues.empty();
  return d;
}

AnnulusElement element_from_framing(const Framing& f, cplx z, const PathOptions& opt) {
  if (z == cplx(0.0)) throw DomainError("annulus element needs a nonzero central scalar");
  return AnnulusElement{framing_path(f, opt), z, f};
}

AnnulusElement standard_element(cplx q, int G, int K) {
  if (!(std::abs(q) > 0.0 && std::abs(q) < 1.0)) throw DomainError("standard_element: require 0 < |q| < 1");
  const cplx lq = std::log(q);
  auto h = [lq](double theta, double t) { return std::exp((1.0 - t) * lq + cplx(0.0, theta)); };
  AnnulusElement E;
  E.path = FieldPath::constant(VectorField::mode(0, lq));
  E.z = 1.0;
  E.framing = Framing::sample(h, G, K);
  return E;
}

AnnulusElement identity_element() { return AnnulusElement{}; }

FieldPath as_linear(const FieldPath& p) {
  if (p.interp() == Interp::Linear) return p;
  std::vector<double> kn;
  std::vector<VectorField> fs;
  const auto& k = p.knots();
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    if (k[i] == k[i + 1]) continue;
    kn.push_back(k[i]);
    fs.push_back(p.fields()[i]);
    kn.push_back(k[i + 1]);
    fs.push_back(p.fields()[i]);
  }
  return FieldPath(std::move(kn), std::move(fs), Interp::Linear);
}

FieldPath rescale_path(const FieldPath& p, double a, double b) {
  if (!(b > a) || a < 0.0 || b > 1.0) throw DomainError("rescale_path: need 0 <= a < b <= 1");
  return concatenate({{p, {a, b}}});
}

FieldPath concatenate(const std::vector<std::pair<FieldPath, std::pair<double, double>>>& pieces) {
  std::vector<double> kn;
  std::vector<VectorField> fs;
  auto gap = [&](double from, double to) {
    kn.push_back(from);
    fs.push_back(VectorField());
    kn.push_back(to);
    fs.push_back(VectorField());
  };
  double cursor = 0.0;
  for (const auto& [path, range] : pieces) {
    const auto [a, b] = range;
    if (a < cursor || !(b > a) || b > 1.0) throw DomainError("concatenate: pieces must be ordered subintervals of [0,1]");
    if (a > cursor) gap(cursor, a);
    FieldPath lin = as_linear(path);
    const auto& lk = lin.knots();
    for (std::size_t i = 0; i < lk.size(); ++i) {
      double t = a + (b - a) * lk[i];
      if (i == 0) t = a;
      if (i + 1 == lk.size()) t = b;
      kn.push_back(t);
      fs.push_back(lin.fields()[i] * cplx(1.0 / (b - a)));
    }
    cursor = b;
  }
  if (cursor < 1.0) gap(cursor, 1.0);
  return FieldPath(std::move(kn), std::move(fs), Interp::Linear);
}

AnnulusElement compose(const AnnulusElement& E1, const AnnulusElement& E2, const ComposeOptions& opt) {
  if (!(opt.sitting_width >= 0.0 && opt.sitting_width < 1.0)) throw DomainError("compose: sitting width must lie in [0,1)");
  const double a = 0.5 * (1.0 - opt.sitting_width);
  const double b = 1.0 - a;

  std::optional<Framing> framing;
  if (E1.framing && E2.framing) {
    const Framing& f1 = *E1.framing;
    const Framing& f2 = *E2.framing;
    if (f1.grid() != f2.grid()) throw DomainError("compose: framings use different theta grids");
    // Boundaries may differ by a dilation w -> s w, which leaves -h_t/h_theta unchanged.
    const CVector in1 = f1.in_curve();
    const CVector out2 = f2.out_curve();
    const cplx s = in1.squaredNorm() > 0 ? in1.dot(out2) / in1.squaredNorm() : cplx(1.0);
    const double mismatch = (out2 - s * in1).cwiseAbs().maxCoeff();
    if (mismatch > opt.boundary_tol * std::max(1.0, out2.cwiseAbs().maxCoeff()))
      throw DomainError("compose: outgoing boundary of the second element does not match the incoming boundary of the first (" +
                        std::to_string(mismatch) + ")");
    std::vector<double> kn;
    std::vector<CVector> rows;
    for (int i = 0; i < f2.knot_count(); ++i) {
      kn.push_back(a * f2.knots()[i]);
      rows.push_back(f2.curve(i));
    }
    for (int i = 0; i < f1.knot_count(); ++i) {
      const double t = b + (1.0 - b) * f1.knots()[i];
      if (t <= kn.back()) continue;
      kn.push_back(t);
      rows.push_back(s * f1.curve(i));
    }
    kn.back() = 1.0;
    CMatrix v(static_cast<Eigen::Index>(kn.size()), f1.grid());
    for (std::size_t i = 0; i < rows.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    Framing f(std::move(kn), std::move(v));
    f.sitting_start = f2.sitting_start;
    f.sitting_end = f1.sitting_end;
    framing = std::move(f);
  }

  std::vector<std::pair<FieldPath, std::pair<double, double>>> pieces;
  pieces.push_back({E2.path, {0.0, a}});
  if (b > a) pieces.push_back({FieldPath::zero(), {a, b}});
  pieces.push_back({E1.path, {b, 1.0}});
  AnnulusElement out;
  out.path = concatenate(pieces);
  out.z = E1.z * E2.z;
  out.framing = std::move(framing);
  return out;
}

AnnulusElement dagger(const AnnulusElement& E) {
  AnnulusElement out;
  out.path = E.path.dagger();
  out.z = std::conj(E.z);
  if (E.framing) {
    const Framing& f = *E.framing;
    const int K = f.knot_count();
    std::vector<double> kn(K);
    CMatrix v(K, f.grid());
    for (int i = 0; i < K; ++i) {
      kn[i] = 1.0 - f.knots()[K - 1 - i];
      v.row(i) = f.values().row(K - 1 - i).unaryExpr([](cplx w) { return 1.0 / std::conj(w); });
    }
    kn.front() = 0.0;
    kn.back() = 1.0;
    Framing g(std::move(kn), std::move(v));
    g.sitting_start = f.sitting_end;
    g.sitting_end = f.sitting_start;
    out.framing = std::move(g);
  }
  return out;
}

// ---------------------------------------------------------------------------

FramingHomotopy::FramingHomotopy(std::vector<double> u_knots, std::vector<Framing> slices)
    : u_knots_(std::move(u_knots)), slices_(std::move(slices)) {
  if (u_knots_.size() < 2 || u_knots_.size() != slices_.size()) throw DomainError("FramingHomotopy: need matching u knots and slices");
  for (std::size_t l = 1; l < slices_.size(); ++l) {
    if (slices_[l].knots() != slices_[0].knots() || slices_[l].grid() != slices_[0].grid())
      throw DomainError("FramingHomotopy: slices must share the (theta, t) grid");
    if (!(u_knots_[l] > u_knots_[l - 1])) throw DomainError("FramingHomotopy: u knots must increase");
  }
}

FramingHomotopy FramingHomotopy::sample(const std::function<cplx(double, double, double)>& h, int G, int K, int Ku) {
  auto uk = uniform_knots(Ku);
  std::vector<Framing> slices;
  for (double u : uk) slices.push_back(Framing::sample([&](double th, double t) { return h(th, t, u); }, G, K));
  return FramingHomotopy(std::move(uk), std::move(slices));
}

CocycleQuadrature homotopy_cocycle_detail(const FramingHomotopy& H, double c, int maxmode) {
  const auto& uk = H.u_knots();
  const auto& tk = H.front().knots();
  const int L = static_cast<int>(uk.size());
  const int K = static_cast<int>(tk.size());
  const int G = H.front().grid();
  std::vector<std::vector<VectorField>> X(L, std::vector<VectorField>(K)), Y(L, std::vector<VectorField>(K));
  for (int l = 0; l < L; ++l) {
    int ulo = 0;
    auto uw = time_weights(uk, l, ulo);
    for (int i = 0; i < K; ++i) {
      int tlo = 0;
      auto tw = time_weights(tk, i, tlo);
      std::vector<cplx> ht(G, 0.0), hu(G, 0.0);
      for (std::size_t s = 0; s < tw.size(); ++s)
        for (int j = 0; j < G; ++j) ht[j] += tw[s] * H.slices()[l].values()(tlo + static_cast<int>(s), j);
      for (std::size_t s = 0; s < uw.size(); ++s)
        for (int j = 0; j < G; ++j) hu[j] += uw[s] * H.slices()[ulo + static_cast<int>(s)].values()(i, j);
      auto h = row_samples(H.slices()[l].values(), i);
      auto ex = extract_field(h, ht, maxmode);
      auto ey = extract_field(h, hu, maxmode);
      if (std::min(ex.min_htheta, ey.min_htheta) < 1e-8) throw DomainError("homotopy_cocycle: degenerate h_theta");
      X[l][i] = std::move(ex.field);
      Y[l][i] = std::move(ey.field);
    }
  }
  CocycleQuadrature out;
  auto wu = quadrature_weights(uk);
  auto wt = quadrature_weights(tk);
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < K; ++i) out.integral += wu[l] * wt[i] * cocycle(X[l][i], Y[l][i], c);

  // d_t Y - d_u X - [X, Y]
  for (int l = 0; l < L; ++l) {
    int ulo = 0;
    auto uw = time_weights(uk, l, ulo);
    for (int i = 0; i < K; ++i) {
      int tlo = 0;
      auto tw = time_weights(tk, i, tlo);
      VectorField r = -witt_bracket(X[l][i], Y[l][i]).resized(maxmode);
      for (std::size_t s = 0; s < tw.size(); ++s) r += Y[l][tlo + static_cast<int>(s)] * cplx(tw[s]);
      for (std::size_t s = 0; s < uw.size(); ++s) r -= X[ulo + static_cast<int>(s)][i] * cplx(uw[s]);
      out.witt_residual = std::max(out.witt_residual, r.resized(maxmode).distance(VectorField(maxmode)));
    }
  }
  return out;
}

cplx homotopy_cocycle(const FramingHomotopy& H, double c, int maxmode) {
  return homotopy_cocycle_detail(H, c, maxmode).integral;
}

// ---------------------------------------------------------------------------

bool Arc::contains(double theta, double slack) const {
  const double s = wrap(theta - start + slack);
  return s <= length + 2.0 * slack;
}

ReferenceAnnulus round_reference(double r, int G) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("round_reference: require 0 < r < 1");
  ReferenceAnnulus ref;
  ref.in.resize(G);
  ref.out.resize(G);
  for (int j = 0; j < G; ++j) {
    const cplx e = std::polar(1.0, fourier::grid_point(j, G));
    ref.in[j] = r * e;
    ref.out[j] = e;
  }
  return ref;
}

PartitionOfUnity bigon_partition(const Arc& I1, const Arc& I2, int G, double ramp) {
  if (!(ramp > 0.0)) throw DomainError("bigon_partition: ramp must be positive");
  const Arc off1 = complement(I1);
  const Arc off2 = complement(I2);
  PartitionOfUnity p;
  p.minus.resize(G);
  p.plus.resize(G);
  p.circ.resize(G);
  for (int j = 0; j < G; ++j) {
    const double th = fourier::grid_point(j, G);
    if (off1.length > 0 && off2.length > 0 && off1.contains(th) && off2.contains(th))
      throw DomainError("bigon_partition: interval interiors do not cover the circle");
    p.plus[j] = off1.length > 0 ? smooth_step(1.0 - arc_distance(off1, th) / ramp) : 0.0;
    p.minus[j] = off2.length > 0 ? smooth_step(1.0 - arc_distance(off2, th) / ramp) : 0.0;
    p.circ[j] = 1.0 - p.minus[j] - p.plus[j];
    if (p.circ[j] < -1e-14) throw DomainError("bigon_partition: ramps overlap; shrink the ramp width");
  }
  return p;
}

BigonFactorization bigon_factor(const CVector& gamma_in, const CVector& gamma_out, const Arc& I1, const Arc& I2,
                                const ReferenceAnnulus& ref, double ramp, int K) {
  const int G = static_cast<int>(gamma_in.size());
  if (gamma_out.size() != G || ref.in.size() != G || ref.out.size() != G)
    throw DomainError("bigon_factor: curves must share one grid");
  BigonFactorization out;
  out.lambda = bigon_partition(I1, I2, G, ramp);
  const auto& lam = out.lambda;
  CVector delta;
  if (ref.delta) {
    delta = *ref.delta;
    if (delta.size() != G) throw DomainError("bigon_factor: base curve grid differs");
  } else {
    delta.resize(G);
    for (int j = 0; j < G; ++j) {
      const cplx mid = std::sqrt(std::abs(ref.in[j]) * std::abs(ref.out[j])) * ref.in[j] / std::abs(ref.in[j]);
      delta[j] = lam.minus[j] * ref.in[j] + lam.plus[j] * ref.out[j] + lam.circ[j] * mid;
    }
  }
  out.delta_A.resize(G);
  for (int j = 0; j < G; ++j) {
    out.delta_A[j] = lam.minus[j] * (gamma_in[j] + (delta[j] - ref.in[j])) +
                     lam.plus[j] * (gamma_out[j] + (delta[j] - ref.out[j])) + lam.circ[j] * delta[j];
  }

  constexpr double boundary_tol = 1e-10;
  out.nesting_margin = INFINITY;
  for (int j = 0; j < G; ++j) {
    const cplx p = out.delta_A[j];
    const double below_out = inside_margin(gamma_out, p);
    const double above_in = -inside_margin(gamma_in, p);
    out.nesting_margin = std::min({out.nesting_margin, below_out, above_in});
  }
  if (out.nesting_margin < -boundary_tol)
    throw DomainError("bigon_factor: intermediate curve is not nested between the boundary curves (margin " +
                      std::to_string(out.nesting_margin) + ")");

  for (int j = 0; j < G; ++j) {
    const double th = fourier::grid_point(j, G);
    if (!I1.contains(th)) out.outer_pinch = std::max(out.outer_pinch, std::abs(out.delta_A[j] - gamma_out[j]));
    if (!I2.contains(th)) out.inner_pinch = std::max(out.inner_pinch, std::abs(out.delta_A[j] - gamma_in[j]));
  }
  out.outer = Framing::linear(out.delta_A, gamma_out, K);
  out.inner = Framing::linear(gamma_in, out.delta_A, K);
  return out;
}

int winding_number(const CVector& curve, cplx p) {
  double total = 0.0;
  const Eigen::Index n = curve.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx a = curve[j] - p;
    const cplx b = curve[(j + 1) % n] - p;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

double inside_margin(const CVector& curve, cplx p) {
  const Eigen::Index n = curve.size();
  double dist = INFINITY;
  for (Eigen::Index j = 0; j < n; ++j) dist = std::min(dist, point_segment_distance(p, curve[j], curve[(j + 1) % n]));
  if (dist == 0.0) return 0.0;
  return winding_number(curve, p) != 0 ? dist : -dist;
}

// ---------------------------------------------------------------------------

nlohmann::json framing_to_json(const Framing& f) {
  return nlohmann::json{{"G", f.grid()}, {"knots", f.knots()}, {"h", matrix_to_json(f.values())}};
}

Framing framing_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("knots") || !j.contains("h")) throw DomainError("framing document needs \"knots\" and \"h\"");
  std::vector<double> knots;
  try {
    knots = j.at("knots").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("framing knots: ") + e.what());
  }
  CMatrix h = matrix_from_json(j.at("h"));
  if (j.contains("G") && j.at("G").get<int>() != h.cols()) throw DomainError("framing: G does not match the sample rows");
  return Framing(std::move(knots), std::move(h));
}

nlohmann::json element_to_json(const AnnulusElement& E) {
  nlohmann::json j = E.framing ? framing_to_json(*E.framing) : nlohmann::json::object();
  j["z"] = complex_to_json(E.z);
  j["path"] = path_to_json(E.path);
  return j;
}

AnnulusElement element_from_json(const nlohmann::json& j, const PathOptions& opt) {
  if (!j.is_object()) throw DomainError("annulus element document must be an object");
  AnnulusElement E;
  if (j.contains("standard")) {
    const auto& s = j.at("standard");
    if (!s.is_object() || !s.contains("q")) throw DomainError("standard element needs \"q\"");
    E = standard_element(complex_from_json(s.at("q")));
  } else if (j.contains("h")) {
    Framing f = framing_from_json(j);
    if (j.contains("path")) {
      E.path = path_from_json(j.at("path"));
    } else {
      E.path = framing_path(f, opt);
    }
    E.framing = std::move(f);
  } else if (j.contains("path")) {
    E.path = path_from_json(j.at("path"));
  } else {
    throw DomainError("annulus element needs one of \"h\", \"path\" or \"standard\"");
  }
  if (j.contains("z")) E.z = complex_from_json(j.at("z"));
  if (E.z == cplx(0.0)) throw DomainError("annulus element needs a nonzero central scalar");
  return E;
}

}  // namespace virann
