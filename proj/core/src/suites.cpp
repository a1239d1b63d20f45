#include "virann/suites.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "virann/rep.hpp"
#include "virann/shapovalov.hpp"

namespace virann {

namespace {

using clock_type = std::chrono::steady_clock;

const std::map<std::string, std::string>& anchors() {
  static const std::map<std::string, std::string> a{
      {"bracket", "Virasoro commutation relations"},
      {"qei", "quantum energy inequality"},
      {"energy", "Sobolev energy bound"},
      {"standard", "standard annulus r^L0"},
      {"semigroup", "semigroup law"},
      {"dagger", "adjoint law"},
      {"cocycle", "cocycle invariance under homotopy"},
      {"segal", "Segal commutation relations"},
      {"holomorphy", "holomorphic dependence"},
      {"gram", "Shapovalov form"},
      {"mobius", "Mobius overlap identity"},
  };
  return a;
}

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)), anchor_(anchors().at(suite_)) {}

  void add(const std::string& id, double residual, double bound, bool lower = false) {
    CheckRow r;
    r.id = suite_ + "." + id;
    r.anchor = anchor_;
    r.residual = residual;
    r.bound = bound;
    r.lower = lower;
    r.pass = lower ? residual > bound : residual <= bound;
    const auto now = clock_type::now();
    r.seconds = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    rows_.push_back(std::move(r));
  }
  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  std::string suite_;
  std::string anchor_;
  std::vector<CheckRow> rows_;
  clock_type::time_point start_ = clock_type::now();
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::mt19937_64 suite_rng(const SuiteConfig& cfg, const std::string& name) {
  return std::mt19937_64(cfg.seed ^ fnv1a(name));
}

int require_level(const ModuleData& M, int maxmode) {
  const int p = protected_level(M, maxmode);
  if (p < 0) throw DomainError("module cutoff too small for modes up to " + std::to_string(maxmode));
  return p;
}

void bracket_suite(const ModuleData& M, const SuiteConfig&, Recorder& rec) {
  const int p = require_level(M, 4);
  const CMatrix P = protected_columns(M, p);
  const Eigen::Index n0 = P.rows(), m0 = P.cols();
  double worst = 0.0;
  for (int m = -4; m <= 4; ++m)
    for (int n = -4; n <= 4; ++n) {
      CMatrix a = CMatrix::Zero(n0, m0), b = a, mn = a, nm = a, rhs = a;
      M.apply_generator(n, 1.0, P, a);
      M.apply_generator(m, 1.0, a, mn);
      M.apply_generator(m, 1.0, P, b);
      M.apply_generator(n, 1.0, b, nm);
      M.apply_generator(m + n, static_cast<double>(m - n), P, rhs);
      if (m + n == 0) rhs += (M.c() / 12.0) * (m * m * m - m) * P;
      worst = std::max(worst, op_norm(mn - nm - rhs));
    }
  rec.add("commutator", worst, 1e-10);

  double adj = 0.0;
  for (int n = 1; n <= 4; ++n) adj = std::max(adj, op_norm(M.lmat(n).adjoint() - M.lmat(-n)));
  rec.add("adjoint", adj, 1e-12);
}

void qei_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  auto rng = suite_rng(cfg, "qei");
  const int p = require_level(M, 4);
  double worst = -INFINITY;
  for (int i = 0; i < 200; ++i) {
    const VectorField X = random_inward_field(4, rng, 0.3);
    const double mu = qei_bound(X, M.c());
    const CMatrix A = pi_field(X, M);
    for (int j = 0; j < 20; ++j) {
      const GradedVector v = random_protected_vector(M, p, rng);
      worst = std::max(worst, v.dot(A * v).real() - mu);
    }
  }
  rec.add("random", worst, 1e-8);

  const VectorField g = VectorField::from_modes({{0, -1.0}, {1, -0.5}, {-1, -0.5}});
  const double exact = M.c() * std::numbers::pi / 48.0;
  rec.add("one_plus_cos", std::abs(qei_bound(g, M.c()) - exact) / exact, 1e-6);
}

void energy_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  auto rng = suite_rng(cfg, "energy");
  std::normal_distribution<double> gauss;
  const int p = require_level(M, 4);
  const double C = 1.0 + std::sqrt(2.0) + std::sqrt(M.c() / 12.0);
  for (int n = 0; n <= 2; ++n) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      VectorField X(4);
      for (int m = -4; m <= 4; ++m) X.at(m) = cplx(gauss(rng), gauss(rng));
      const GradedVector v = random_protected_vector(M, p, rng);
      CMatrix out = CMatrix::Zero(v.size(), 1);
      apply_field(X, M, v, out);
      const double lhs = sobolev_norm(out.col(0), n, M);
      const double rhs = C * field_norm(X, n + 1.5) * sobolev_norm(v, n + 1, M);
      worst = std::max(worst, lhs / rhs);
    }
    rec.add("ratio_n" + std::to_string(n), worst, 1.0);
  }
}

double diagonal_error(const CMatrix& U, const ModuleData& M, cplx q) {
  const auto levels = M.coordinate_levels();
  const cplx lq = std::log(q);
  double err = 0.0;
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
      const cplx expect = i == j ? std::exp((M.h() + levels[static_cast<std::size_t>(i)]) * lq) : cplx(0.0);
      err = std::max(err, std::abs(U(i, j) - expect));
    }
  return err;
}

void standard_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  RepresentOptions opt;
  opt.tol = cfg.tol;
  rec.add("real", diagonal_error(represent(standard_element(0.5), M, opt).U, M, 0.5), 1e-9);
  const cplx q = std::polar(0.5, 0.1);
  rec.add("complex", diagonal_error(represent(standard_element(q), M, opt).U, M, q), 1e-9);
  const CMatrix U0 = represent(identity_element(), M, opt).U;
  rec.add("identity", op_norm(U0 - CMatrix::Identity(U0.rows(), U0.cols())), 1e-12);
}

void semigroup_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  auto rng = suite_rng(cfg, "semigroup");
  rec.add("standard", semigroup_residual(standard_element(0.5), standard_element(0.6), M, cfg.tol), 1e-8);
  AnnulusElement E;
  E.path = random_inward_path(2, rng, 2);
  rec.add("identity", semigroup_residual(E, identity_element(), M, cfg.tol), 1e-8);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    AnnulusElement E1, E2;
    E1.path = random_inward_path(2, rng, 2);
    E2.path = random_inward_path(2, rng, 2);
    worst = std::max(worst, semigroup_residual(E1, E2, M, cfg.tol));
  }
  rec.add("random", worst, 1e-5);
}

void dagger_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  auto rng = suite_rng(cfg, "dagger");
  rec.add("standard", dagger_residual(standard_element(0.5), M, cfg.tol), 1e-9);

  AnnulusElement rot;
  rot.path = FieldPath::constant(VectorField::mode(0, cplx(0.0, 0.7)));
  rec.add("rotation", dagger_residual(rot, M, cfg.tol), 1e-9);
  RepresentOptions opt;
  opt.tol = cfg.tol;
  const CMatrix U = represent(rot, M, opt).U;
  rec.add("rotation_unitary", op_norm(U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())), 1e-8);

  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    AnnulusElement E;
    E.path = random_inward_path(3, rng, 2);
    worst = std::max(worst, dagger_residual(E, M, cfg.tol));
  }
  rec.add("random", worst, 1e-6);
}

void cocycle_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  PathOptions po;
  po.maxmode = 2;
  const FramingHomotopy wig = wiggle_homotopy(0.5, cplx(0.6, 0.8), 0.2);
  rec.add("constant", cocycle_invariance_residual(constant_homotopy(wig.back()), M, 2, cfg.tol, po).residual, 1e-8);
  rec.add("reparametrization",
          cocycle_invariance_residual(reparametrization_homotopy(0.5, 0.5), M, 0, cfg.tol, po).residual, 1e-7);
  rec.add("wiggle_1", cocycle_invariance_residual(wig, M, 2, cfg.tol, po).residual, 1e-4);
  const FramingHomotopy wig2 = wiggle_homotopy(0.4, cplx(1.0, 0.0), 0.15, 1.0);
  rec.add("wiggle_2", cocycle_invariance_residual(wig2, M, 2, cfg.tol, po).residual, 1e-4);
}

void segal_suite(const ModuleData& M, const SuiteConfig& cfg, Recorder& rec) {
  auto rng = suite_rng(cfg, "segal");
  std::vector<VectorField> modes;
  for (int n = -2; n <= 2; ++n) modes.push_back(VectorField::mode(n));
  const auto diag = segal_residuals(standard_element(0.5), modes, M, cfg.tol);
  for (int n = -2; n <= 2; ++n) rec.add("standard_l" + std::to_string(n), diag[static_cast<std::size_t>(n + 2)].residual, 1e-8);

  const std::vector<VectorField> low{VectorField::mode(-1), VectorField::mode(0), VectorField::mode(1)};
  for (int k = 1; k <= 2; ++k) {
    AnnulusElement E;
    E.path = random_inward_path(2, rng, 1, 0.05, 0.7);
    double worst = 0.0;
    for (const auto& s : segal_residuals(E, low, M, cfg.tol)) worst = std::max(worst, s.residual);
    rec.add("random_" + std::to_string(k), worst, 1e-4);
  }
}

void holomorphy_suite(const ModuleData& M, const SuiteConfig&, Recorder& rec) {
  const double tol = 1e-11;
  const ElementFamily standard = [](cplx m) { return standard_element(m); };
  const ElementFamily shifted = [](cplx m) {
    AnnulusElement E;
    E.path = FieldPath::constant(VectorField::from_modes({{0, std::log(0.5)}, {1, m}}));
    return E;
  };
  const ElementFamily anti = [](cplx m) { return standard_element(std::conj(m)); };
  const double eps = 0.04;
  auto order = [&](const ElementFamily& f, cplx m0) {
    const double a = holomorphy_residual(f, m0, eps, M, tol);
    const double b = holomorphy_residual(f, m0, eps / 2, M, tol);
    return std::log2(a / b);
  };
  rec.add("standard_order", order(standard, 0.5), 1.8, true);
  rec.add("l1_order", order(shifted, 0.0), 1.8, true);
  rec.add("anti_control", holomorphy_residual(anti, 0.5, eps, M, tol), 0.1, true);
}

void gram_suite(const ModuleData& M, const SuiteConfig&, Recorder& rec) {
  double exact_mismatch = 0.0, float_err = 0.0;
  const double ch[3][2] = {{2.0, 0.5}, {1.0, 0.0}, {0.5, 0.0625}};
  for (const auto& p : ch) {
    const Rational c(Rational(static_cast<long long>(p[0] * 16)) / 16), h(Rational(static_cast<long long>(p[1] * 16)) / 16);
    for (int k = 0; k <= 4; ++k) {
      const auto g = gram_table<Rational>(c, h, k);
      const auto basis = partitions_of(k);
      const Eigen::MatrixXd gf = gram_matrix({p[0], p[1], k}, k);
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
          if (shapovalov_by_reduction<Rational>(basis[i], basis[j], c, h) != g[i][j]) exact_mismatch += 1.0;
          const double gv = g[i][j].convert_to<double>();
          float_err = std::max(float_err, std::abs(gf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - gv) /
                                              std::max(1.0, std::abs(gv)));
        }
    }
  }
  rec.add("rational_oracle", exact_mismatch, 0.0);
  rec.add("float_oracle", float_err, 1e-12);
  if (M.cutoff() >= 2) {
    const double c = M.c(), h = M.h();
    Eigen::Matrix2d expect;
    expect << 4 * h + c / 2, 6 * h, 6 * h, 4 * h * (2 * h + 1);
    rec.add("level2_closed_form", (M.gram(2) - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

void mobius_suite(const ModuleData& M, const SuiteConfig&, Recorder& rec) {
  const double h = 0.5, w = 0.5;
  const double target = std::pow(1.0 - w * w, -2.0 * h);
  rec.add("partial_sum_N20", std::abs(mobius_partial_sum(M.c(), h, w, 20) - target), 1e-6);
  double formula = 0.0, fact = 1.0;
  for (int k = 0; k <= 20; ++k) {
    if (k > 0) fact *= k;
    formula += std::pow(w, 2 * k) * mobius_term_norm(h, k) / (fact * fact);
  }
  rec.add("term_formula", std::abs(formula - mobius_partial_sum(M.c(), h, w, 20)), 1e-12);
}

using SuiteFn = void (*)(const ModuleData&, const SuiteConfig&, Recorder&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"bracket", bracket_suite},       {"qei", qei_suite},         {"energy", energy_suite},
      {"standard", standard_suite},     {"semigroup", semigroup_suite}, {"dagger", dagger_suite},
      {"cocycle", cocycle_suite},       {"segal", segal_suite},     {"holomorphy", holomorphy_suite},
      {"gram", gram_suite},             {"mobius", mobius_suite},
  };
  return r;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

}  // namespace

const std::vector<std::string>& default_suites() {
  static const std::vector<std::string> s{"bracket", "qei",    "energy", "standard",  "semigroup",
                                          "dagger",  "cocycle", "segal", "holomorphy"};
  return s;
}

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return s;
}

SuiteConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected an object");
  SuiteConfig cfg;
  for (const auto& [key, val] : doc.items()) {
    if (key == "module") {
      if (!val.is_object()) throw ConfigError("config: module must be an object");
      for (const auto& [k, v] : val.items()) {
        if (k == "c" || k == "h") {
          if (!v.is_number()) throw ConfigError("config: module." + k + " must be a number");
          (k == "c" ? cfg.module.c : cfg.module.h) = v.get<double>();
        } else if (k == "N") {
          if (!v.is_number_integer()) throw ConfigError("config: module.N must be an integer");
          cfg.module.N = v.get<int>();
        } else {
          throw ConfigError("config: unknown key module." + k);
        }
      }
    } else if (key == "tol") {
      if (!val.is_number()) throw ConfigError("config: tol must be a number");
      cfg.tol = val.get<double>();
    } else if (key == "seed") {
      if (!val.is_number_integer() || (!val.is_number_unsigned() && val.get<long long>() < 0))
        throw ConfigError("config: seed must be a nonnegative integer");
      cfg.seed = val.get<std::uint64_t>();
    } else if (key == "threads") {
      if (!val.is_number_integer() || val.get<long long>() < 0)
        throw ConfigError("config: threads must be a nonnegative integer");
      cfg.threads = val.get<int>();
    } else if (key == "suites") {
      if (!val.is_array()) throw ConfigError("config: suites must be an array");
      for (const auto& s : val) {
        if (!s.is_string()) throw ConfigError("config: suite names must be strings");
        cfg.suites.push_back(s.get<std::string>());
      }
    } else {
      throw ConfigError("config: unknown key " + key);
    }
  }
  if (!(cfg.module.c > 0.0)) throw ConfigError("config: module.c must be positive");
  if (!(cfg.module.h >= 0.0)) throw ConfigError("config: module.h must be nonnegative");
  if (cfg.module.N < 8 || cfg.module.N > 16) throw ConfigError("config: module.N must lie in [8, 16]");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ConfigError("config: tol must lie in (0, 1)");
  for (const auto& s : cfg.suites)
    if (!anchors().count(s)) throw ConfigError("config: unknown suite " + s);
  return cfg;
}

nlohmann::json config_to_json(const SuiteConfig& cfg) {
  nlohmann::json j;
  j["module"] = {{"c", cfg.module.c}, {"h", cfg.module.h}, {"N", cfg.module.N}};
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  j["suites"] = cfg.suites.empty() ? default_suites() : cfg.suites;
  return j;
}

bool Report::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::vector<CheckRow> run_suite(const std::string& name, const ModuleData& module, const SuiteConfig& cfg) {
  for (const auto& [n, fn] : registry())
    if (n == name) {
      Recorder rec(name);
      try {
        fn(module, cfg, rec);
      } catch (const Error& e) {
        rec.add("error", NAN, 0.0);
      }
      return rec.take();
    }
  throw ConfigError("unknown suite " + name);
}

Report run_suites(const SuiteConfig& cfg) {
  Report rep;
  rep.config = cfg;
  const std::vector<std::string> names = cfg.suites.empty() ? default_suites() : cfg.suites;
  for (const auto& s : names)
    if (!anchors().count(s)) throw ConfigError("unknown suite " + s);
  const ModuleData module = build_module(cfg.module);

  std::vector<std::vector<CheckRow>> results(names.size());
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(names.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) results[i] = run_suite(names[i], module, cfg);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& r : results)
    for (auto& row : r) rep.rows.push_back(std::move(row));
  return rep;
}

nlohmann::json report_to_json(const Report& r, bool timings) {
  nlohmann::json j;
  j["config"] = config_to_json(r.config);
  j["conventions"] = {
      {"element", "U = z T exp(int_0^1 pi(X(t)) dt), X = -h_t/h_theta, t = 0 the inner boundary"},
      {"cocycle", "U_1 = exp(+I) U_0, I = double integral of omega(X, Y), Y = -h_u/h_theta"},
      {"norm", "largest singular value on the protected block"},
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json o;
    o["id"] = row.id;
    o["anchor"] = row.anchor;
    o["residual"] = std::isfinite(row.residual) ? nlohmann::json(row.residual) : nlohmann::json(nullptr);
    o["bound"] = row.bound;
    o["relation"] = row.lower ? ">" : "<=";
    o["pass"] = row.pass;
    if (timings) o["seconds"] = row.seconds;
    rows.push_back(std::move(o));
  }
  j["checks"] = std::move(rows);
  j["pass"] = r.all_pass();
  return j;
}

std::string report_to_csv(const Report& r, bool timings) {
  std::ostringstream os;
  os << "id,anchor,residual,bound,pass";
  if (timings) os << ",seconds";
  os << '\n';
  for (const auto& row : r.rows) {
    os << row.id << ',' << row.anchor << ',' << (std::isfinite(row.residual) ? format_double(row.residual) : "nan") << ','
       << format_double(row.bound) << ',' << (row.pass ? "true" : "false");
    if (timings) os << ',' << format_double(row.seconds);
    os << '\n';
  }
  return os.str();
}

FramingHomotopy wiggle_homotopy(double r, cplx alpha, double eps, double beta, int degree, int G, int K, int Ku) {
  if (degree != 1 && degree != 2) throw DomainError("wiggle_homotopy: degree must be 1 or 2");
  const cplx I(0.0, 1.0);
  return FramingHomotopy::sample(
      [=](double th, double t, double u) {
        const cplx a = eps * u * alpha * (t * (1 - t) + beta * I * t * t * (1 - t));
        const cplx w = std::polar(1.0, degree * th);
        const cplx B = (w + a) / (1.0 + std::conj(a) * w);
        const cplx ratio = degree == 1 ? B / w : std::sqrt(B / w);
        return std::pow(r, 1 - t) * std::polar(1.0, th) * ratio;
      },
      G, K, Ku);
}

FramingHomotopy reparametrization_homotopy(cplx q, double strength, int G, int K, int Ku) {
  const cplx lq = std::log(q);
  return FramingHomotopy::sample(
      [=](double th, double t, double u) {
        const double phi = t + strength * u * t * (1 - t);
        return std::exp((1 - phi) * lq) * std::polar(1.0, th);
      },
      G, K, Ku);
}

FramingHomotopy constant_homotopy(const Framing& f, int Ku) {
  std::vector<double> u;
  for (int i = 0; i < Ku; ++i) u.push_back(static_cast<double>(i) / (Ku - 1));
  return FramingHomotopy(std::move(u), std::vector<Framing>(static_cast<std::size_t>(Ku), f));
}

}  // namespace virann
