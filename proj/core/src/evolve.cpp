#include "virann/evolve.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "virann/json_io.hpp"

namespace virann {

int GeneratorPath::segment_of(double t) const {
  const auto& b = breaks();
  auto it = std::upper_bound(b.begin(), b.end(), t);
  return std::clamp(static_cast<int>(it - b.begin()) - 1, 0, segment_count() - 1);
}

CMatrix GeneratorPath::matrix(double t, int seg) const {
  CMatrix out(dim(), dim());
  apply(t, seg, CMatrix::Identity(dim(), dim()), out);
  return out;
}

// ---------------------------------------------------------------------------

MatrixPath::MatrixPath(std::vector<double> knots, std::vector<CMatrix> mats, Interp interp)
    : knots_(std::move(knots)), mats_(std::move(mats)), interp_(interp) {
  detail::validate_knots(knots_, mats_.size());
  dim_ = static_cast<int>(mats_.front().rows());
  for (const auto& m : mats_)
    if (m.rows() != dim_ || m.cols() != dim_) throw DomainError("MatrixPath: matrices must be square of one size");
  layout_ = detail::KnotLayout::build(knots_, interp_);
}

MatrixPath MatrixPath::constant(const CMatrix& a) { return MatrixPath({0.0, 1.0}, {a, a}); }

CMatrix MatrixPath::matrix(double t, int seg) const {
  auto [i, w] = layout_.locate(knots_, t, seg);
  if (interp_ == Interp::Constant || w == 0.0) return mats_[i];
  if (w == 1.0) return mats_[i + 1];
  return (1.0 - w) * mats_[i] + w * mats_[i + 1];
}

void MatrixPath::apply(double t, int seg, const CMatrix& in, CMatrix& out) const { out.noalias() = matrix(t, seg) * in; }

void MatrixPath::apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const {
  out.noalias() = matrix(t, seg).adjoint() * in;
}

namespace detail {

SmoothPieces smooth_pieces(const FieldPath& path) {
  SmoothPieces p;
  p.breaks = path.knots();
  p.breaks.erase(std::unique(p.breaks.begin(), p.breaks.end()), p.breaks.end());
  for (std::size_t i = 0; i + 1 < p.breaks.size(); ++i)
    p.segment.push_back(path.segment_of(0.5 * (p.breaks[i] + p.breaks[i + 1])));
  return p;
}

}  // namespace detail

FieldGenerator::FieldGenerator(const FieldPath& path, const ModuleData& module)
    : path_(path), module_(module), pieces_(detail::smooth_pieces(path)) {
  if (path.support() > module.cutoff()) throw DomainError("FieldGenerator: path modes exceed module cutoff");
}

void FieldGenerator::apply(double t, int seg, const CMatrix& in, CMatrix& out) const {
  out.setZero(in.rows(), in.cols());
  apply_field(path_.at(t, pieces_.segment[seg]), module_, in, out);
}

void FieldGenerator::apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const {
  out.setZero(in.rows(), in.cols());
  apply_field(adjoint_field(path_.at(t, pieces_.segment[seg])), module_, in, out);
}

CMatrix FieldGenerator::matrix(double t, int seg) const { return pi_field(path_.at(t, pieces_.segment[seg]), module_); }

ReversedAdjointPath::ReversedAdjointPath(const GeneratorPath& base) : base_(base) {
  const auto& b = base.breaks();
  breaks_.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) breaks_[i] = 1.0 - b[b.size() - 1 - i];
  breaks_.front() = 0.0;
  breaks_.back() = 1.0;
}

void ReversedAdjointPath::apply(double t, int seg, const CMatrix& in, CMatrix& out) const {
  base_.apply_adjoint(1.0 - t, segment_count() - 1 - seg, in, out);
}

void ReversedAdjointPath::apply_adjoint(double t, int seg, const CMatrix& in, CMatrix& out) const {
  base_.apply(1.0 - t, segment_count() - 1 - seg, in, out);
}

// ---------------------------------------------------------------------------

EvolutionResult piecewise_exp(const GeneratorPath& path, double s, double t, int n) {
  if (!(s <= t)) throw DomainError("piecewise_exp: require s <= t");
  if (n < 1) throw DomainError("piecewise_exp: need at least one subdivision");
  const int D = path.dim();
  EvolutionResult r;
  r.s = s;
  r.t = t;
  r.method = "piecewise_exp";
  r.U = CMatrix::Identity(D, D);
  const double d = (t - s) / n;
  CMatrix prevA, E;
  for (int j = 0; j < n; ++j) {
    const double tau = s + j * d;
    CMatrix A = path.matrix(tau, path.segment_of(tau));
    // Piecewise-constant generators repeat the same factor.
    if (j == 0 || A != prevA) {
      E = (d * A).exp();
      prevA = std::move(A);
    }
    r.U = E * r.U;
  }
  r.steps = n;
  if (!r.U.allFinite()) throw NumericalError("piecewise_exp: non-finite entries (generator too large for the cutoff)");
  return r;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double scaled_error(const CMatrix& err, const CMatrix& y0, const CMatrix& y1, double tol) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < err.cols(); ++j)
    for (Eigen::Index i = 0; i < err.rows(); ++i) {
      const double sc = tol * (1.0 + std::max(std::abs(y0(i, j)), std::abs(y1(i, j))));
      worst = std::max(worst, std::abs(err(i, j)) / sc);
    }
  return worst;
}

}  // namespace

EvolutionResult propagate(const GeneratorPath& path, double s, double t, const CMatrix& Y0, const OdeOptions& opt) {
  if (!(s <= t)) throw DomainError("propagate: require s <= t");
  if (!(opt.tol > 0)) throw DomainError("propagate: tolerance must be positive");
  if (Y0.rows() != path.dim()) throw DomainError("propagate: initial block has the wrong row count");
  EvolutionResult r;
  r.s = s;
  r.t = t;
  r.method = "dopri5";
  CMatrix y = Y0;
  const Eigen::Index R = y.rows(), C = y.cols();
  CMatrix k1(R, C), k2(R, C), k3(R, C), k4(R, C), k5(R, C), k6(R, C), k7(R, C), tmp(R, C), ynew(R, C);
  const auto& br = path.breaks();
  double h = 0.0;

  for (int seg = path.segment_of(s); seg < path.segment_count() && br[seg] < t; ++seg) {
    const double a = std::max(s, br[seg]);
    const double b = std::min(t, br[seg + 1]);
    if (!(b > a)) continue;
    double x = a;
    path.apply(x, seg, y, k1);
    if (h <= 0.0) {
      const double ny = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
      const double nf = k1.cwiseAbs().maxCoeff() / ny;
      h = 0.5 * std::pow(opt.tol, 0.2) / std::max(nf, 1e-3);
    }
    while (x < b) {
      if (r.steps + r.rejected > opt.max_steps) throw NumericalError("ode_exp: step budget exhausted");
      bool last = false;
      double hs = h;
      if (x + hs >= b || b - (x + hs) < 1e-12 * (b - a)) {
        hs = b - x;
        last = true;
      }
      tmp = y + hs * a21 * k1;
      path.apply(x + c2 * hs, seg, tmp, k2);
      tmp = y + hs * (a31 * k1 + a32 * k2);
      path.apply(x + c3 * hs, seg, tmp, k3);
      tmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      path.apply(x + c4 * hs, seg, tmp, k4);
      tmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      path.apply(x + c5 * hs, seg, tmp, k5);
      tmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      path.apply(last ? b : x + hs, seg, tmp, k6);
      ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      path.apply(last ? b : x + hs, seg, ynew, k7);
      tmp = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double err = scaled_error(tmp, y, ynew, opt.tol);
      if (!std::isfinite(err)) throw NumericalError("ode_exp: non-finite state");
      if (err <= 1.0) {
        x = last ? b : x + hs;
        y.swap(ynew);
        k1.swap(k7);
        ++r.steps;
        r.errest += err * opt.tol;
        const double fac = err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        if (!last || hs >= h) h = hs * fac;
      } else {
        ++r.rejected;
        h = hs * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      }
      if (h < opt.min_step * std::max(1.0, std::abs(x))) throw NumericalError("ode_exp: step size underflow");
    }
  }
  r.U = std::move(y);
  return r;
}

EvolutionResult ode_exp(const GeneratorPath& path, double s, double t, double tol) {
  OdeOptions opt;
  opt.tol = tol;
  return propagate(path, s, t, CMatrix::Identity(path.dim(), path.dim()), opt);
}

double flow_residual(const GeneratorPath& path, double s, double r, double t, double tol) {
  if (!(s <= r && r <= t)) throw DomainError("flow_residual: require s <= r <= t");
  auto Urs = ode_exp(path, s, r, tol);
  OdeOptions opt;
  opt.tol = tol;
  auto Utrs = propagate(path, r, t, Urs.U, opt);
  auto Uts = ode_exp(path, s, t, tol);
  return op_norm(Utrs.U - Uts.U);
}

double adjoint_evolution_check(const GeneratorPath& path, double tol, const std::vector<std::pair<double, double>>& pairs) {
  ReversedAdjointPath rev(path);
  double worst = 0.0;
  for (const auto& [s, t] : pairs) {
    auto Ut = ode_exp(rev, s, t, tol);
    auto U = ode_exp(path, 1.0 - t, 1.0 - s, tol);
    worst = std::max(worst, op_norm(Ut.U - U.U.adjoint()));
  }
  return worst;
}

DerivativeComparison parameter_derivative(const PathFamily& family, double p, double delta, double tol, int panels) {
  if (!(delta > 0)) throw DomainError("parameter_derivative: delta must be positive");
  auto A0 = family(p);
  auto Ap = family(p + delta);
  auto Am = family(p - delta);
  const int D = A0->dim();
  const auto& br = A0->breaks();

  // Five-point Gauss-Legendre on each panel of each segment.
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  struct Node {
    double x;
    double w;
    int seg;
  };
  std::vector<Node> nodes;
  for (int seg = 0; seg + 1 < static_cast<int>(br.size()); ++seg) {
    const double a = br[seg], b = br[seg + 1];
    for (int q = 0; q < panels; ++q) {
      const double lo = a + (b - a) * q / panels;
      const double hi = a + (b - a) * (q + 1) / panels;
      for (int k = 0; k < 5; ++k) nodes.push_back({0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[k], 0.5 * (hi - lo) * gw[k], seg});
    }
  }
  OdeOptions opt;
  opt.tol = tol;
  // Forward propagators U(x_q, 0).
  std::vector<CMatrix> fwd(nodes.size());
  CMatrix cur = CMatrix::Identity(D, D);
  double x = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    cur = propagate(*A0, x, nodes[q].x, cur, opt).U;
    x = nodes[q].x;
    fwd[q] = cur;
  }
  // U(1, x_q) = U(1, x_{q+1}) U(x_{q+1}, x_q)
  std::vector<CMatrix> back(nodes.size());
  CMatrix acc = propagate(*A0, nodes.back().x, 1.0, CMatrix::Identity(D, D), opt).U;
  back.back() = acc;
  for (int q = static_cast<int>(nodes.size()) - 2; q >= 0; --q) {
    CMatrix step = propagate(*A0, nodes[q].x, nodes[q + 1].x, CMatrix::Identity(D, D), opt).U;
    acc = acc * step;
    back[q] = acc;
  }
  DerivativeComparison out;
  out.integral = CMatrix::Zero(D, D);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const int sp = Ap->segment_of(nodes[q].x);
    const int sm = Am->segment_of(nodes[q].x);
    CMatrix dA = (Ap->matrix(nodes[q].x, sp) - Am->matrix(nodes[q].x, sm)) / (2.0 * delta);
    out.integral += nodes[q].w * (back[q] * dA * fwd[q]);
  }
  const CMatrix Up = ode_exp(*Ap, 0.0, 1.0, tol).U;
  const CMatrix Um = ode_exp(*Am, 0.0, 1.0, tol).U;
  out.finite_difference = (Up - Um) / (2.0 * delta);
  out.difference = op_norm(out.integral - out.finite_difference);
  return out;
}

GrowthReport growth_bound_check(const GeneratorPath& path, double omega, const std::vector<std::pair<double, double>>& pairs,
                                const CMatrix& vectors, double tol) {
  GrowthReport rep;
  OdeOptions opt;
  opt.tol = tol;
  for (const auto& [s, t] : pairs) {
    CMatrix Uv = propagate(path, s, t, vectors, opt).U;
    const double bound = std::exp(omega * (t - s));
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
      rep.max_margin = std::max(rep.max_margin, Uv.col(j).norm() - bound * vectors.col(j).norm());
      ++rep.samples;
    }
  }
  return rep;
}

nlohmann::json evolution_to_json(const EvolutionResult& r) {
  return nlohmann::json{{"method", r.method}, {"s", r.s},           {"t", r.t},
                        {"steps", r.steps},   {"rejected", r.rejected}, {"errest", r.errest},
                        {"U", matrix_to_json(r.U)}};
}

}  // namespace virann
