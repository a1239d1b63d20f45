#include "virann/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "virann/fourier.hpp"
#include "virann/json_io.hpp"

namespace virann {

VectorField::VectorField(int maxmode) : maxmode_(maxmode), coeffs_(2 * maxmode + 1, cplx(0.0)) {
  if (maxmode < 0) throw DomainError("VectorField: negative maxmode");
}

VectorField VectorField::mode(int n, cplx a) {
  VectorField X(std::abs(n));
  X.at(n) = a;
  return X;
}

VectorField VectorField::from_modes(const std::vector<std::pair<int, cplx>>& modes) {
  VectorField X;
  for (const auto& [n, a] : modes) X.at(n) += a;
  return X;
}

int VectorField::support() const {
  for (int n = maxmode_; n > 0; --n)
    if ((*this)[n] != cplx(0.0) || (*this)[-n] != cplx(0.0)) return n;
  return 0;
}

cplx& VectorField::at(int n) {
  if (std::abs(n) > maxmode_) *this = resized(std::abs(n));
  return coeffs_[n + maxmode_];
}

VectorField VectorField::resized(int maxmode) const {
  VectorField out(maxmode);
  const int m = std::min(maxmode, maxmode_);
  for (int n = -m; n <= m; ++n) out.coeffs_[n + maxmode] = (*this)[n];
  return out;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (o.maxmode_ > maxmode_) *this = resized(o.maxmode_);
  for (int n = -o.maxmode_; n <= o.maxmode_; ++n) coeffs_[n + maxmode_] += o[n];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (o.maxmode_ > maxmode_) *this = resized(o.maxmode_);
  for (int n = -o.maxmode_; n <= o.maxmode_; ++n) coeffs_[n + maxmode_] -= o[n];
  return *this;
}

VectorField& VectorField::operator*=(cplx s) {
  for (auto& a : coeffs_) a *= s;
  return *this;
}

double VectorField::distance(const VectorField& o) const {
  const int m = std::max(maxmode_, o.maxmode_);
  double d = 0.0;
  for (int n = -m; n <= m; ++n) d = std::max(d, std::abs((*this)[n] - o[n]));
  return d;
}

VectorField witt_bracket(const VectorField& X, const VectorField& Y) {
  const int M = X.maxmode() + Y.maxmode();
  VectorField Z(M);
  for (int m = -X.maxmode(); m <= X.maxmode(); ++m) {
    const cplx a = X[m];
    if (a == cplx(0.0)) continue;
    for (int n = -Y.maxmode(); n <= Y.maxmode(); ++n) {
      if (m == n) continue;
      Z.at(m + n) += static_cast<double>(m - n) * a * Y[n];
    }
  }
  return Z;
}

cplx cocycle(const VectorField& X, const VectorField& Y, double c) {
  const int M = std::min(X.maxmode(), Y.maxmode());
  cplx acc = 0.0;
  for (int m = -M; m <= M; ++m) acc += static_cast<double>(m * m * m - m) * X[m] * Y[-m];
  return c / 12.0 * acc;
}

double field_norm(const VectorField& X, double t) {
  double acc = 0.0;
  for (int m = -X.maxmode(); m <= X.maxmode(); ++m) acc += std::pow(1.0 + std::abs(m), t) * std::abs(X[m]);
  return acc;
}

VectorField adjoint_field(const VectorField& X) {
  VectorField Y(X.maxmode());
  for (int m = -X.maxmode(); m <= X.maxmode(); ++m) Y.at(m) = std::conj(X[-m]);
  return Y;
}

std::vector<cplx> to_theta(const VectorField& X, int G) {
  if (G <= 2 * X.maxmode()) throw DomainError("to_theta: grid must exceed twice the mode bound");
  std::vector<cplx> F(G, cplx(0.0));
  for (int n = -X.maxmode(); n <= X.maxmode(); ++n) F[(n % G + G) % G] += cplx(0.0, -1.0) * X[n];
  return fourier::synthesize(F);
}

VectorField from_theta(const std::vector<cplx>& g, int maxmode) {
  const int G = static_cast<int>(g.size());
  if (G <= 2 * maxmode) throw DomainError("from_theta: grid must exceed twice the mode bound");
  auto F = fourier::analyze(g);
  VectorField X(maxmode);
  for (int n = -maxmode; n <= maxmode; ++n) X.at(n) = cplx(0.0, 1.0) * F[(n % G + G) % G];
  return X;
}

double inward_margin(const VectorField& X, int G) {
  auto g = to_theta(X, G);
  // Re(sum a_n e^{in theta}) = Re(i g) = -Im g
  double m = -INFINITY;
  for (const auto& v : g) m = std::max(m, -v.imag());
  return m;
}

bool is_inward(const VectorField& X, int G, double tol) { return inward_margin(X, G) <= tol; }

double qei_bound(const VectorField& X, double c, const QeiOptions& opt) {
  const double margin = inward_margin(X, opt.G);
  if (margin > opt.inward_tol)
    throw NotInwardError("qei_bound: field is not inward (margin " + std::to_string(margin) + ")", margin);
  // Im g and its derivative on the half-shifted grid, evaluated from the modes.
  const int G = opt.G;
  const double pi = std::numbers::pi;
  std::vector<cplx> F(G, cplx(0.0)), dF(G, cplx(0.0));
  for (int n = -X.maxmode(); n <= X.maxmode(); ++n) {
    const cplx shift = std::polar(1.0, n * pi / G);
    F[(n % G + G) % G] += cplx(0.0, -1.0) * X[n] * shift;
    dF[(n % G + G) % G] += cplx(0.0, -1.0) * X[n] * shift * cplx(0.0, n);
  }
  auto g = fourier::synthesize(F);
  auto dg = fourier::synthesize(dF);
  double acc = 0.0;
  for (int j = 0; j < G; ++j) {
    const double s = g[j].imag();
    if (s <= opt.gridtol) continue;
    const double ds = dg[j].imag();
    acc += ds * ds / (4.0 * s);
  }
  return c / 24.0 * acc * (2.0 * pi / G);
}

double theta_curvature_norm(const VectorField& X) {
  double acc = 0.0;
  for (int n = -X.maxmode(); n <= X.maxmode(); ++n) acc += std::pow(static_cast<double>(n), 4) * std::norm(X[n]);
  return std::sqrt(2.0 * std::numbers::pi * acc);
}

CMatrix pi_field(const VectorField& X, const ModuleData& module) {
  if (X.support() > module.cutoff()) throw DomainError("pi_field: field modes exceed module cutoff");
  const int D = module.total_dim();
  CMatrix out = CMatrix::Zero(D, D);
  apply_field(X, module, CMatrix::Identity(D, D), out);
  return out;
}

void apply_field(const VectorField& X, const ModuleData& module, const CMatrix& in, CMatrix& out) {
  const int M = std::min(X.maxmode(), module.cutoff());
  for (int n = -M; n <= M; ++n) module.apply_generator(n, X[n], in, out);
}

double pi_norm_bound(const VectorField& X, const ModuleData& module) {
  double acc = 0.0;
  const int M = std::min(X.maxmode(), module.cutoff());
  for (int n = -M; n <= M; ++n) {
    if (X[n] == cplx(0.0)) continue;
    double nb = 0.0;
    for (int k = std::max(0, n); k <= std::min(module.cutoff(), module.cutoff() + n); ++k) {
      const auto& b = module.block(n, k);
      if (b.size() == 0) continue;
      nb = std::max(nb, n == 0 ? module.h() + k : op_norm(b));
    }
    acc += std::abs(X[n]) * nb;
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace detail {

void validate_knots(const std::vector<double>& knots, std::size_t values) {
  if (knots.size() < 2) throw DomainError("path: need at least two knots");
  if (knots.size() != values) throw DomainError("path: knots and samples differ in length");
  if (knots.front() != 0.0 || knots.back() != 1.0) throw DomainError("path: knots must start at 0 and end at 1");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] >= knots[i - 1])) throw DomainError("path: knots must be nondecreasing");
    if (i >= 2 && knots[i] == knots[i - 2]) throw DomainError("path: a knot may repeat at most twice");
  }
  if (knots[1] == 0.0 || knots[knots.size() - 2] == 1.0) throw DomainError("path: endpoint knots may not repeat");
}

KnotLayout KnotLayout::build(const std::vector<double>& knots, Interp interp) {
  KnotLayout L;
  L.interp = interp;
  L.knot_count = static_cast<int>(knots.size());
  L.breaks.push_back(0.0);
  L.first.push_back(0);
  const int K = L.knot_count;
  for (int i = 1; i < K - 1; ++i) {
    const bool jump = knots[i] == knots[i + 1];
    if (interp == Interp::Constant) {
      if (knots[i] == knots[i - 1]) continue;
      L.breaks.push_back(knots[i]);
      L.first.push_back(jump ? i + 1 : i);
    } else if (jump) {
      L.breaks.push_back(knots[i]);
      L.first.push_back(i + 1);
    }
  }
  L.breaks.push_back(1.0);
  return L;
}

int KnotLayout::segment_of(double t) const {
  const int S = static_cast<int>(breaks.size()) - 1;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  return std::clamp(static_cast<int>(it - breaks.begin()) - 1, 0, S - 1);
}

std::pair<int, double> KnotLayout::locate(const std::vector<double>& knots, double t, int seg) const {
  const int S = static_cast<int>(breaks.size()) - 1;
  if (seg < 0 || seg >= S) throw DomainError("path: segment out of range");
  const int lo = first[seg];
  if (interp == Interp::Constant) return {lo, 0.0};
  const int hi = (seg + 1 < S) ? first[seg + 1] - 1 : knot_count - 1;
  int i = static_cast<int>(std::upper_bound(knots.begin() + lo, knots.begin() + hi + 1, t) - knots.begin()) - 1;
  i = std::clamp(i, lo, hi - 1);
  const double t0 = knots[i], t1 = knots[i + 1];
  const double w = t1 > t0 ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0) : 1.0;
  return {i, w};
}

}  // namespace detail

FieldPath::FieldPath(std::vector<double> knots, std::vector<VectorField> fields, Interp interp)
    : knots_(std::move(knots)), fields_(std::move(fields)), interp_(interp) {
  detail::validate_knots(knots_, fields_.size());
  for (const auto& f : fields_) maxmode_ = std::max(maxmode_, f.maxmode());
  for (auto& f : fields_)
    if (f.maxmode() != maxmode_) f = f.resized(maxmode_);
  layout_ = detail::KnotLayout::build(knots_, interp_);
}

FieldPath FieldPath::constant(const VectorField& X) { return FieldPath({0.0, 1.0}, {X, X}, Interp::Linear); }

FieldPath FieldPath::zero(int maxmode) { return constant(VectorField(maxmode)); }

int FieldPath::support() const {
  int s = 0;
  for (const auto& f : fields_) s = std::max(s, f.support());
  return s;
}

int FieldPath::segment_of(double t) const { return layout_.segment_of(t); }

VectorField FieldPath::at(double t) const { return at(t, segment_of(t)); }

VectorField FieldPath::at(double t, int seg) const {
  auto [i, w] = layout_.locate(knots_, t, seg);
  if (interp_ == Interp::Constant || w == 0.0) return fields_[i];
  if (w == 1.0) return fields_[i + 1];
  VectorField out = fields_[i] * cplx(1.0 - w);
  out += fields_[i + 1] * cplx(w);
  return out;
}

FieldPath FieldPath::dagger() const {
  const int K = static_cast<int>(knots_.size());
  std::vector<double> kn(K);
  std::vector<VectorField> fs(K);
  if (interp_ == Interp::Linear) {
    for (int i = 0; i < K; ++i) {
      kn[i] = 1.0 - knots_[K - 1 - i];
      fs[i] = adjoint_field(fields_[K - 1 - i]);
    }
    return FieldPath(std::move(kn), std::move(fs), interp_);
  }
  // Constant pieces [t_i, t_{i+1}) map to (1-t_{i+1}, 1-t_i]; value fields[i].
  std::vector<double> rk;
  std::vector<VectorField> rf;
  for (int i = K - 2; i >= 0; --i) {
    if (knots_[i] == knots_[i + 1]) continue;
    rk.push_back(1.0 - knots_[i + 1]);
    rf.push_back(adjoint_field(fields_[i]));
  }
  rk.push_back(1.0);
  rf.push_back(rf.back());
  return FieldPath(std::move(rk), std::move(rf), Interp::Constant);
}

double FieldPath::distance(const FieldPath& o) const {
  if (knots_ != o.knots_) throw DomainError("FieldPath::distance: knot vectors differ");
  double d = 0.0;
  for (std::size_t i = 0; i < fields_.size(); ++i) d = std::max(d, fields_[i].distance(o.fields_[i]));
  return d;
}

double path_inward_margin(const FieldPath& path, int G) {
  double m = -INFINITY;
  const auto& kn = path.knots();
  for (std::size_t i = 0; i < kn.size(); ++i) {
    m = std::max(m, inward_margin(path.fields()[i], G));
    if (i + 1 < kn.size() && kn[i + 1] > kn[i]) m = std::max(m, inward_margin(path.at(0.5 * (kn[i] + kn[i + 1])), G));
  }
  return m;
}

double path_qei_rate(const FieldPath& path, double c, const QeiOptions& opt) {
  double m = 0.0;
  const auto& kn = path.knots();
  for (std::size_t i = 0; i < kn.size(); ++i) {
    m = std::max(m, qei_bound(path.fields()[i], c, opt));
    if (i + 1 < kn.size() && kn[i + 1] > kn[i]) m = std::max(m, qei_bound(path.at(0.5 * (kn[i] + kn[i + 1])), c, opt));
  }
  return m;
}

nlohmann::json field_to_json(const VectorField& X) {
  nlohmann::json modes = nlohmann::json::array();
  for (int n = -X.maxmode(); n <= X.maxmode(); ++n) {
    if (X[n] == cplx(0.0)) continue;
    modes.push_back(nlohmann::json::array({n, X[n].real(), X[n].imag()}));
  }
  return nlohmann::json{{"modes", modes}};
}

VectorField field_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("modes") || !j.at("modes").is_array())
    throw DomainError("vector field document needs a \"modes\" array");
  VectorField X;
  for (const auto& m : j.at("modes")) {
    if (!m.is_array() || m.size() != 3) throw DomainError("mode entries must be [n, re, im]");
    X.at(m[0].get<int>()) += cplx(m[1].get<double>(), m[2].get<double>());
  }
  return X;
}

nlohmann::json path_to_json(const FieldPath& p) {
  nlohmann::json fields = nlohmann::json::array();
  for (const auto& f : p.fields()) fields.push_back(field_to_json(f));
  return nlohmann::json{{"knots", p.knots()},
                        {"fields", fields},
                        {"interp", p.interp() == Interp::Linear ? "linear" : "constant"}};
}

FieldPath path_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("knots") || !j.contains("fields"))
    throw DomainError("field path document needs \"knots\" and \"fields\"");
  std::vector<double> knots;
  try {
    knots = j.at("knots").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("field path knots: ") + e.what());
  }
  std::vector<VectorField> fields;
  for (const auto& f : j.at("fields")) fields.push_back(field_from_json(f));
  Interp interp = Interp::Linear;
  if (j.contains("interp")) {
    const auto s = j.at("interp").get<std::string>();
    if (s == "constant")
      interp = Interp::Constant;
    else if (s != "linear")
      throw DomainError("field path interp must be \"linear\" or \"constant\"");
  }
  return FieldPath(std::move(knots), std::move(fields), interp);
}

}  // namespace virann
