#include "virann/rep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "virann/shapovalov.hpp"

namespace virann {

int protected_level(const ModuleData& module, int maxmode) { return std::max(-1, module.cutoff() - 2 * maxmode); }

CMatrix protected_columns(const ModuleData& module, int level) {
  const int m = level < 0 ? 0 : module.prefix_dim(level);
  return CMatrix::Identity(module.total_dim(), m);
}

RepresentedAnnulus represent(const FieldPath& path, cplx z, const ModuleData& module, const RepresentOptions& opt) {
  if (path.support() > module.cutoff())
    throw DomainError("represent: path uses mode " + std::to_string(path.support()) + " beyond the cutoff " +
                      std::to_string(module.cutoff()));
  const double margin = path_inward_margin(path);
  if (margin > opt.inward_tol)
    throw NotInwardError("represent: path is not inward (margin " + std::to_string(margin) + ")", margin);
  FieldGenerator gen(path, module);
  RepresentedAnnulus out;
  out.z = z;
  for (const auto& X : path.fields()) out.generator_bound = std::max(out.generator_bound, pi_norm_bound(X, module));
  OdeOptions o;
  o.tol = opt.tol;
  EvolutionResult r;
  if (opt.columns) {
    out.columns = *opt.columns;
    r = propagate(gen, 0.0, 1.0, protected_columns(module, *opt.columns), o);
  } else {
    r = propagate(gen, 0.0, 1.0, CMatrix::Identity(module.total_dim(), module.total_dim()), o);
  }
  out.U = z * r.U;
  out.steps = r.steps;
  out.rejected = r.rejected;
  out.errest = r.errest;
  return out;
}

RepresentedAnnulus represent(const AnnulusElement& E, const ModuleData& module, const RepresentOptions& opt) {
  return represent(E.path, E.z, module, opt);
}

CMatrix represent_apply(const AnnulusElement& E, const ModuleData& module, const CMatrix& Y, double tol) {
  if (E.path.support() > module.cutoff()) throw DomainError("represent: path modes exceed the cutoff");
  FieldGenerator gen(E.path, module);
  OdeOptions o;
  o.tol = tol;
  return E.z * propagate(gen, 0.0, 1.0, Y, o).U;
}

double semigroup_residual(const AnnulusElement& E1, const AnnulusElement& E2, const ModuleData& module, double tol) {
  const int p = protected_level(module, std::max(E1.path.support(), E2.path.support()));
  if (p < 0) return 0.0;
  RepresentOptions opt;
  opt.tol = tol;
  opt.columns = p;
  const CMatrix U12 = represent(compose(E1, E2), module, opt).U;
  const CMatrix U2 = represent(E2, module, opt).U;
  const CMatrix U1U2 = represent_apply(E1, module, U2, tol);
  return op_norm(U12 - U1U2);
}

double dagger_residual(const AnnulusElement& E, const ModuleData& module, double tol) {
  const int p = protected_level(module, E.path.support());
  if (p < 0) return 0.0;
  RepresentOptions opt;
  opt.tol = tol;
  opt.columns = p;
  const CMatrix Ud = represent(dagger(E), module, opt).U;
  // U(E)^* P from the backward adjoint equation of the original path.
  if (E.path.support() > module.cutoff()) throw DomainError("represent: path modes exceed the cutoff");
  FieldGenerator gen(E.path, module);
  ReversedAdjointPath back(gen);
  OdeOptions o;
  o.tol = tol;
  const CMatrix UstarP = std::conj(E.z) * propagate(back, 0.0, 1.0, protected_columns(module, p), o).U;
  return op_norm(Ud - UstarP);
}

CocycleCheck cocycle_invariance_residual(const FramingHomotopy& H, const ModuleData& module, int nominal_mode,
                                         double tol, const PathOptions& popt) {
  PathOptions po = popt;
  po.maxmode = std::min(po.maxmode, module.cutoff());
  const AnnulusElement E0 = element_from_framing(H.front(), 1.0, po);
  const AnnulusElement E1 = element_from_framing(H.back(), 1.0, po);
  const auto q = homotopy_cocycle_detail(H, module.c(), po.maxmode);
  CocycleCheck out;
  out.exponent = q.integral;
  out.witt_residual = q.witt_residual;
  const int p = protected_level(module, nominal_mode);
  if (p < 0) return out;
  RepresentOptions opt;
  opt.tol = tol;
  opt.columns = p;
  const CMatrix U0 = represent(E0, module, opt).U;
  const CMatrix U1 = represent(E1, module, opt).U;
  out.residual = op_norm(U1 - std::exp(q.integral) * U0);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

CVector pack(const VectorField& f, int B) {
  CVector v(2 * B + 1);
  for (int n = -B; n <= B; ++n) v[n + B] = f[n];
  return v;
}

VectorField unpack(const CVector& v, int B) {
  VectorField f(B);
  for (int n = -B; n <= B; ++n) f.at(n) = v[n + B];
  return f;
}

// f -> [X(t), f] on modes |n| <= B.
class TransportGenerator final : public GeneratorPath {
 public:
  TransportGenerator(const FieldPath& path, int B) : path_(path), B_(B), pieces_(detail::smooth_pieces(path)) {}

  int dim() const override { return 2 * B_ + 1; }
  const std::vector<double>& breaks() const override { return pieces_.breaks; }

  void apply(double t, int seg, const CMatrix& in, CMatrix& out) const override {
    const VectorField X = path_.at(t, pieces_.segment[seg]);
    out.setZero(in.rows(), in.cols());
    const int M = X.maxmode();
    for (int n = -B_; n <= B_; ++n)
      for (int m = -M; m <= M; ++m) {
        const int k = n - m;
        if (k < -B_ || k > B_ || X[m] == 0.0) continue;
        out.row(n + B_) += static_cast<double>(2 * m - n) * X[m] * in.row(k + B_);
      }
  }

  void apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const override {
    const VectorField X = path_.at(t, pieces_.segment[seg]);
    out.setZero(in.rows(), in.cols());
    const int M = X.maxmode();
    for (int n = -B_; n <= B_; ++n)
      for (int m = -M; m <= M; ++m) {
        const int k = n - m;
        if (k < -B_ || k > B_ || X[m] == 0.0) continue;
        out.row(k + B_) += static_cast<double>(2 * m - n) * std::conj(X[m]) * in.row(n + B_);
      }
  }

 private:
  const FieldPath& path_;
  int B_;
  detail::SmoothPieces pieces_;
};

double overflow(const VectorField& X, const VectorField& f, int B) {
  const VectorField br = witt_bracket(X, f);
  double out = 0.0;
  for (int n = -br.maxmode(); n <= br.maxmode(); ++n)
    if (n < -B || n > B) out += std::abs(br[n]);
  return out;
}

// f at the given nondecreasing times.
std::vector<VectorField> transport_at(const VectorField& f0, const FieldPath& path, const std::vector<double>& times,
                                      const TransportOptions& opt, double& tail) {
  const int B = opt.budget;
  if (B < f0.support()) throw DomainError("transport_field: budget smaller than the initial field");
  TransportGenerator gen(path, B);
  OdeOptions o;
  o.tol = opt.tol;
  CMatrix y = pack(f0, B);
  const double scale = std::max(field_norm(f0, 0.0), 1e-300);
  double t = 0.0;
  std::vector<VectorField> out;
  out.reserve(times.size());
  tail = 0.0;
  for (double s : times) {
    if (s > t) {
      y = propagate(gen, t, s, y, o).U;
      t = s;
    }
    VectorField f = unpack(y.col(0), B);
    tail = std::max(tail, overflow(path.at(std::min(t, 1.0)), f, B) / scale);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TransportResult transport_field(const VectorField& f0, const FieldPath& path, const TransportOptions& opt) {
  if (opt.samples < 1) throw DomainError("transport_field: need at least one sample per segment");
  std::vector<double> times;
  const auto& br = path.breaks();
  for (int seg = 0; seg + 1 < static_cast<int>(br.size()); ++seg)
    for (int j = 0; j < opt.samples; ++j) times.push_back(br[seg] + (br[seg + 1] - br[seg]) * j / opt.samples);
  times.push_back(1.0);
  times.erase(std::unique(times.begin(), times.end()), times.end());
  TransportResult r;
  auto fs = transport_at(f0, path, times, opt, r.tail);
  r.f = FieldPath(times, fs);
  return r;
}

std::vector<SegalCheck> segal_residuals(const AnnulusElement& E, const std::vector<VectorField>& f0s,
                                        const ModuleData& module, double tol, const TransportOptions& topt,
                                        std::optional<int> level) {
  TransportOptions to = topt;
  to.budget = std::min(to.budget, module.cutoff());

  // Gauss-Legendre nodes per segment for the omega integral; f(1) last.
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const int panels = 8;
  std::vector<double> times, weights;
  std::vector<int> segs;
  const auto& br = E.path.breaks();
  for (int seg = 0; seg + 1 < static_cast<int>(br.size()); ++seg)
    for (int q = 0; q < panels; ++q) {
      const double lo = br[seg] + (br[seg + 1] - br[seg]) * q / panels;
      const double hi = br[seg] + (br[seg + 1] - br[seg]) * (q + 1) / panels;
      for (int k = 0; k < 5; ++k) {
        times.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[k]);
        weights.push_back(0.5 * (hi - lo) * gw[k]);
        segs.push_back(seg);
      }
    }
  times.push_back(1.0);

  const std::size_t nf = f0s.size();
  std::vector<SegalCheck> out(nf);
  std::vector<VectorField> f1s(nf);
  int support = E.path.support();
  for (std::size_t j = 0; j < nf; ++j) {
    auto fs = transport_at(f0s[j], E.path, times, to, out[j].tail);
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
      out[j].omega_integral += weights[i] * cocycle(E.path.at(times[i], segs[i]), fs[i], module.c());
    f1s[j] = fs.back();
    support = std::max(support, f0s[j].support());
  }
  if (nf == 0) return out;

  const int p = level ? std::min(*level, module.cutoff()) : protected_level(module, support);
  if (p < 0) return out;
  const CMatrix P = protected_columns(module, p);
  const Eigen::Index m = P.cols();
  // One propagation for [P, pi(f0_1) P, ...].
  CMatrix stack = CMatrix::Zero(P.rows(), m * static_cast<Eigen::Index>(nf + 1));
  stack.leftCols(m) = P;
  for (std::size_t j = 0; j < nf; ++j) {
    CMatrix pf0 = CMatrix::Zero(P.rows(), m);
    apply_field(f0s[j], module, P, pf0);
    stack.middleCols(m * static_cast<Eigen::Index>(j + 1), m) = pf0;
  }
  const CMatrix Tstack = represent_apply(E, module, stack, tol);
  const CMatrix TP = Tstack.leftCols(m);
  for (std::size_t j = 0; j < nf; ++j) {
    CMatrix pf1T = CMatrix::Zero(P.rows(), m);
    apply_field(f1s[j], module, TP, pf1T);
    out[j].residual =
        op_norm(Tstack.middleCols(m * static_cast<Eigen::Index>(j + 1), m) - pf1T - out[j].omega_integral * TP);
  }
  return out;
}

SegalCheck segal_residual(const AnnulusElement& E, const VectorField& f0, const ModuleData& module, double tol,
                          const TransportOptions& topt, std::optional<int> level) {
  return segal_residuals(E, {f0}, module, tol, topt, level).front();
}

double holomorphy_residual(const ElementFamily& family, cplx m0, double eps, const ModuleData& module, double tol,
                           int columns) {
  if (!(eps > 0)) throw DomainError("holomorphy_residual: eps must be positive");
  const cplx I(0.0, 1.0);
  const AnnulusElement Ep = family(m0 + eps), Em = family(m0 - eps), Eip = family(m0 + I * eps), Eim = family(m0 - I * eps);
  if (columns < 0) {
    const int M = std::max({Ep.path.support(), Em.path.support(), Eip.path.support(), Eim.path.support()});
    columns = std::max(0, protected_level(module, M));
  }
  RepresentOptions opt;
  opt.tol = tol;
  opt.columns = columns;
  const CMatrix D = (represent(Ep, module, opt).U - represent(Em, module, opt).U +
                     I * (represent(Eip, module, opt).U - represent(Eim, module, opt).U)) /
                    (4.0 * eps);
  return op_norm(D);
}

double mobius_term_norm(double h, int n) {
  double v = 1.0;
  for (int k = 0; k < n; ++k) v *= (k + 1) * (2.0 * h + k);
  return v;
}

double mobius_partial_sum(double c, double h, double absw, int N) {
  double sum = 0.0;
  double fact = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) fact *= k;
    std::vector<int> word(k, 1);
    word.insert(word.end(), k, -1);
    const auto res = normal_order_reduce<double>(word, c, h);
    auto it = res.find(PartitionLabel{});
    const double nrm = it == res.end() ? 0.0 : it->second;
    sum += std::pow(absw, 2 * k) * nrm / (fact * fact);
  }
  return sum;
}

}  // namespace virann
