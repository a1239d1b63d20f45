#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "virann/annulus.hpp"
#include "virann/evolve.hpp"
#include "virann/field.hpp"
#include "virann/virmod.hpp"

namespace virann {

// Levels N - 2 * maxmode, clamped at -1 (empty block).
int protected_level(const ModuleData& module, int maxmode);

struct RepresentOptions {
  double tol = 1e-10;
  // When set, only the columns of levels <= columns are propagated (U * P).
  std::optional<int> columns;
  double inward_tol = 1e-10;
};

struct RepresentedAnnulus {
  CMatrix U;
  cplx z = 1.0;
  int columns = -1;
  long steps = 0;
  long rejected = 0;
  double errest = 0.0;
  // max over t of ||pi(X(t))|| bound, for stiffness diagnostics.
  double generator_bound = 0.0;
};

// U = z * time-ordered exp of pi(X(t)) over [0,1]. Throws NotInwardError and DomainError.
RepresentedAnnulus represent(const FieldPath& path, cplx z, const ModuleData& module, const RepresentOptions& opt = {});
RepresentedAnnulus represent(const AnnulusElement& E, const ModuleData& module, const RepresentOptions& opt = {});

// (U(E) Y) for a column block Y.
CMatrix represent_apply(const AnnulusElement& E, const ModuleData& module, const CMatrix& Y, double tol = 1e-10);

// Column block of the identity on levels <= level.
CMatrix protected_columns(const ModuleData& module, int level);

// ||(U(E1 E2) - U(E1) U(E2)) P||
double semigroup_residual(const AnnulusElement& E1, const AnnulusElement& E2, const ModuleData& module, double tol = 1e-10);
// ||U(E^dagger) P - U(E)^* P||
double dagger_residual(const AnnulusElement& E, const ModuleData& module, double tol = 1e-10);

struct CocycleCheck {
  double residual = 0.0;
  cplx exponent = 0.0;
  double witt_residual = 0.0;
};

// ||U_1 P - exp(I) U_0 P|| with I the double integral of omega(h_t/h_theta, h_u/h_theta).
// Extracted paths carry small tails up to popt.maxmode; P covers the levels
// protected for the nominal mode bound of the homotopy.
CocycleCheck cocycle_invariance_residual(const FramingHomotopy& H, const ModuleData& module, int nominal_mode,
                                         double tol = 1e-10, const PathOptions& popt = {});

struct TransportOptions {
  // Mode range kept for f(t).
  int budget = 8;
  double tol = 1e-11;
  // Output samples per path segment.
  int samples = 32;
};

struct TransportResult {
  // f(t) on the output knots, linear in between.
  FieldPath f;
  // Largest l^1 mass of [X,f] pushed beyond the budget, relative to ||f||_0.
  double tail = 0.0;
};

// f_t = [X(t), f] in the l-basis, i.e. f_t = X_theta f - X f_theta for theta coefficients.
TransportResult transport_field(const VectorField& f0, const FieldPath& path, const TransportOptions& opt = {});

struct SegalCheck {
  double residual = 0.0;
  cplx omega_integral = 0.0;
  double tail = 0.0;
};

// ||(T pi(f(0)) - pi(f(1)) T - (int omega(X,f)) T) P||, T = U(E). P covers levels <= level,
// by default the levels protected for the modes of X and f0.
SegalCheck segal_residual(const AnnulusElement& E, const VectorField& f0, const ModuleData& module, double tol = 1e-10,
                          const TransportOptions& topt = {}, std::optional<int> level = std::nullopt);

// segal_residual for several f0 sharing one propagation of T; P is protected for all of them.
std::vector<SegalCheck> segal_residuals(const AnnulusElement& E, const std::vector<VectorField>& f0s,
                                        const ModuleData& module, double tol = 1e-10, const TransportOptions& topt = {},
                                        std::optional<int> level = std::nullopt);

using ElementFamily = std::function<AnnulusElement(cplx)>;

// || d/d conj(m) U(E_m) P || by the four-point stencil m0 +- eps, m0 +- i eps.
double holomorphy_residual(const ElementFamily& family, cplx m0, double eps, const ModuleData& module, double tol = 1e-11,
                           int columns = -1);

// sum_{k<=N} |w|^{2k} ||L_{-1}^k v||^2 / (k!)^2 with the norms from word reduction.
double mobius_partial_sum(double c, double h, double absw, int N);
// n! prod_{k<n} (2h+k)
double mobius_term_norm(double h, int n);

}  // namespace virann
