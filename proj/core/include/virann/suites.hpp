#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "virann/annulus.hpp"
#include "virann/virmod.hpp"

namespace virann {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SuiteConfig {
  ModuleParams module{2.0, 0.5, 12};
  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  // Worker threads for independent suites; 0 picks the hardware concurrency.
  int threads = 0;
};

// Suites run when the configuration lists none.
const std::vector<std::string>& default_suites();
// Every accepted suite name.
const std::vector<std::string>& known_suites();

// Throws ConfigError naming the offending key.
SuiteConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SuiteConfig& cfg);

struct CheckRow {
  std::string id;
  std::string anchor;
  double residual = 0.0;
  double bound = 0.0;
  // Control checks pass when the residual exceeds the bound.
  bool lower = false;
  bool pass = false;
  double seconds = 0.0;
};

struct Report {
  SuiteConfig config;
  std::vector<CheckRow> rows;
  bool all_pass() const;
};

std::vector<CheckRow> run_suite(const std::string& name, const ModuleData& module, const SuiteConfig& cfg);
Report run_suites(const SuiteConfig& cfg);

nlohmann::json report_to_json(const Report& r, bool timings = false);
// Columns id,anchor,residual,bound,pass and seconds when timings is set.
std::string report_to_csv(const Report& r, bool timings = false);

// h = r^{1-t} e^{i theta} (B_a(w)/w)^{1/d}, w = e^{i d theta}, B_a the disc automorphism
// (w+a)/(1+conj(a) w), a = eps u alpha (t(1-t) + i beta t^2(1-t)). Fields stay in modes |n| <= d.
FramingHomotopy wiggle_homotopy(double r, cplx alpha, double eps, double beta = 2.0, int degree = 2, int G = 256,
                                int K = 128, int Ku = 17);
// q^{1-phi_u(t)} e^{i theta} with phi_u(t) = t + strength u t(1-t).
FramingHomotopy reparametrization_homotopy(cplx q, double strength, int G = 128, int K = 128, int Ku = 9);
// Every slice equal to f.
FramingHomotopy constant_homotopy(const Framing& f, int Ku = 5);

}  // namespace virann
