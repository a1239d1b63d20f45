#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "virann/json_io.hpp"
#include "virann/rep.hpp"
#include "virann/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace virann;

namespace {

enum Exit { kOk = 0, kUsage = 1, kPrecondition = 2, kFailed = 3, kInternal = 4 };

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text(const std::string& out, const std::string& name, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  fs::path p(out);
  if (fs::is_directory(p) || p.extension().empty()) {
    fs::create_directories(p);
    p /= name;
  } else if (p.has_parent_path()) {
    fs::create_directories(p.parent_path());
  }
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
}

struct ModuleFlags {
  std::optional<double> c, h;
  std::optional<int> N;
};

void add_module_flags(CLI::App* app, ModuleFlags& m) {
  app->set_help_flag("--help", "Print this help message and exit");
  app->add_option("--c", m.c, "central charge")->envname("VIRANN_C");
  app->add_option("--h", m.h, "lowest weight")->envname("VIRANN_H");
  app->add_option("--N", m.N, "level cutoff")->envname("VIRANN_N");
}

int cmd_build(const ModuleFlags& mf, const std::string& out) {
  ModuleParams p;
  if (!mf.c || !mf.h || !mf.N) throw ConfigError("build needs --c, --h and --N");
  p.c = *mf.c;
  p.h = *mf.h;
  p.N = *mf.N;
  if (p.N < 0 || p.N > 20) throw ConfigError("--N must lie in [0, 20]");
  if (!(p.c > 0) || !(p.h >= 0)) throw ConfigError("--c must be positive and --h nonnegative");
  const ModuleData m = build_module(p);
  write_text(out, "module.json", module_to_json(m).dump() + "\n");
  std::cerr << "module c=" << p.c << " h=" << p.h << " N=" << p.N << " total dimension " << m.total_dim() << "\n";
  for (int k = 0; k <= p.N; ++k)
    if (static_cast<std::size_t>(m.dim(k)) < partition_count(k))
      std::cerr << "level " << k << ": " << partition_count(k) - m.dim(k) << " null direction(s) quotiented\n";
  return kOk;
}

ModuleData load_module(const std::string& file, const ModuleFlags& mf) {
  if (!file.empty()) return module_from_json(read_json(file));
  if (!mf.c || !mf.h || !mf.N) throw ConfigError("represent needs --module or --c, --h and --N");
  return build_module({*mf.c, *mf.h, *mf.N});
}

// ||W U W^{-1}|| with W = diag((1+h+k)^n).
double sobolev_operator_norm(const CMatrix& U, const ModuleData& M, double n) {
  const auto lv = M.coordinate_levels();
  Eigen::VectorXd w(U.rows());
  for (Eigen::Index i = 0; i < U.rows(); ++i) w[i] = std::pow(1.0 + M.h() + lv[static_cast<std::size_t>(i)], n);
  return op_norm(w.asDiagonal() * U * w.cwiseInverse().asDiagonal());
}

int cmd_represent(const std::string& module_file, const ModuleFlags& mf, const std::string& element_file, double tol,
                  const std::string& format, const std::string& out) {
  const ModuleData M = load_module(module_file, mf);
  PathOptions po;
  po.maxmode = M.cutoff();
  const AnnulusElement E = element_from_json(read_json(element_file), po);
  RepresentOptions opt;
  opt.tol = tol;
  const RepresentedAnnulus R = represent(E, M, opt);

  json bounds;
  bounds["op_norm"] = op_norm(R.U);
  bounds["inward_margin"] = path_inward_margin(E.path);
  const double omega = path_qei_rate(E.path, M.c());
  bounds["qei_rate"] = omega;
  bounds["growth_bound"] = std::abs(E.z) * std::exp(omega);
  json sob = json::array();
  for (int n = 0; n <= 2; ++n) sob.push_back({{"n", n}, {"norm", sobolev_operator_norm(R.U, M, n)}});
  bounds["sobolev_norms"] = std::move(sob);

  if (format == "csv") {
    std::ostringstream os;
    os << "row,col,re,im\n";
    char buf[96];
    for (Eigen::Index i = 0; i < R.U.rows(); ++i)
      for (Eigen::Index j = 0; j < R.U.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g\n", static_cast<long>(i), static_cast<long>(j),
                      R.U(i, j).real(), R.U(i, j).imag());
        os << buf;
      }
    write_text(out, "represent.csv", os.str());
  } else {
    json doc;
    doc["module"] = {{"c", M.c()}, {"h", M.h()}, {"N", M.cutoff()}};
    doc["z"] = complex_to_json(R.z);
    doc["U"] = matrix_to_json(R.U);
    doc["solver"] = {{"steps", R.steps}, {"rejected", R.rejected}, {"errest", R.errest}, {"tol", tol}};
    doc["bounds"] = std::move(bounds);
    write_text(out, "represent.json", doc.dump() + "\n");
  }
  std::cerr << "represented on dimension " << M.total_dim() << " in " << R.steps << " steps\n";
  return kOk;
}

int cmd_verify(const std::string& config_file, const ModuleFlags& mf, std::optional<double> tol,
               std::optional<std::uint64_t> seed, std::vector<std::string> suites, std::optional<int> threads,
               const std::string& format, const std::string& out, bool timings) {
  json doc = config_file.empty() ? json::object() : read_json(config_file);
  if (!doc.is_object()) throw ConfigError("config: expected an object");
  if (mf.c || mf.h || mf.N) {
    if (!doc.contains("module")) doc["module"] = json::object();
    if (!doc["module"].is_object()) throw ConfigError("config: module must be an object");
    if (mf.c) doc["module"]["c"] = *mf.c;
    if (mf.h) doc["module"]["h"] = *mf.h;
    if (mf.N) doc["module"]["N"] = *mf.N;
  }
  if (tol) doc["tol"] = *tol;
  if (seed) doc["seed"] = *seed;
  if (threads) doc["threads"] = *threads;
  if (!suites.empty()) {
    std::vector<std::string> flat;
    for (const auto& s : suites) {
      std::stringstream ss(s);
      for (std::string part; std::getline(ss, part, ',');)
        if (!part.empty()) flat.push_back(part);
    }
    doc["suites"] = flat;
  }
  const SuiteConfig cfg = config_from_json(doc);
  const Report rep = run_suites(cfg);
  if (format == "csv")
    write_text(out, "report.csv", report_to_csv(rep, timings));
  else
    write_text(out, "report.json", report_to_json(rep, timings).dump(2) + "\n");

  int failed = 0;
  for (const auto& r : rep.rows)
    if (!r.pass) {
      ++failed;
      std::cerr << "FAIL " << r.id << " residual " << r.residual << (r.lower ? " not above " : " above ") << r.bound
                << "\n";
    }
  std::cerr << rep.rows.size() - failed << "/" << rep.rows.size() << " checks passed\n";
  return failed == 0 ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Virasoro representations of annuli"};
  app.require_subcommand(1);
  // --h is the lowest weight.
  app.set_help_flag("--help", "Print this help message and exit");

  ModuleFlags mf;
  std::string out, format = "json", module_file, element_file, config_file;
  double tol = 1e-10;
  std::optional<double> vtol;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> suites;
  bool timings = false;

  auto* build = app.add_subcommand("build", "Build a truncated module and write it as JSON");
  add_module_flags(build, mf);
  build->add_option("--out", out, "output file or directory")->envname("VIRANN_OUT");

  auto* repr = app.add_subcommand("represent", "Represent an annulus element on a module");
  add_module_flags(repr, mf);
  repr->add_option("--module", module_file, "module JSON from build");
  repr->add_option("--element", element_file, "annulus element JSON")->required();
  repr->add_option("--tol", tol, "solver tolerance")->envname("VIRANN_TOL");
  repr->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->envname("VIRANN_FORMAT");
  repr->add_option("--out", out, "output file or directory")->envname("VIRANN_OUT");

  auto* verify = app.add_subcommand("verify", "Run verification suites and write a report");
  add_module_flags(verify, mf);
  verify->add_option("--config", config_file, "suite configuration JSON");
  verify->add_option("--tol", vtol, "solver tolerance")->envname("VIRANN_TOL");
  verify->add_option("--seed", seed, "random seed")->envname("VIRANN_SEED");
  verify->add_option("--suite", suites, "suite names, repeatable or comma separated")->envname("VIRANN_SUITE");
  verify->add_option("--threads", threads, "worker threads")->envname("VIRANN_THREADS");
  verify->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->envname("VIRANN_FORMAT");
  verify->add_option("--out", out, "output file or directory")->envname("VIRANN_OUT");
  verify->add_flag("--timings", timings, "add per-check seconds to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(mf, out);
    if (*repr) return cmd_represent(module_file, mf, element_file, tol, format, out);
    if (*verify) return cmd_verify(config_file, mf, vtol, seed, suites, threads, format, out, timings);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotInwardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const NonUnitaryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
