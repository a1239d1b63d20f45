#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "virann/partition.hpp"
#include "virann/types.hpp"

namespace virann {

struct ModuleParams {
  double c = 0.0;
  double h = 0.0;
  int N = 0;
};

// Vector coordinates in the orthonormal basis of a ModuleData, levels ascending.
using GradedVector = CVector;

// Level-truncated irreducible lowest-weight module L(c,h), levels 0..N.
//
// Generators are stored as level blocks: block(n, k) is the matrix of L_n from
// level k to level k-n in orthonormal coordinates. Blocks with n < 0 are the
// adjoints of the n > 0 blocks.
class ModuleData {
 public:
  ModuleData() = default;

  const ModuleParams& params() const { return params_; }
  double c() const { return params_.c; }
  double h() const { return params_.h; }
  int cutoff() const { return params_.N; }
  double nulltol() const { return nulltol_; }

  const std::vector<int>& dims() const { return dims_; }
  int dim(int level) const { return dims_.at(level); }
  int total_dim() const { return total_; }
  int offset(int level) const { return offsets_.at(level); }
  // Number of coordinates belonging to levels <= level (clamped to the module).
  int prefix_dim(int level) const;

  const std::vector<PartitionLabel>& basis() const { return basis_; }
  // Shapovalov gram on the partition basis of one level.
  const Eigen::MatrixXd& gram(int level) const { return gram_.at(level); }
  // Columns are the orthonormal coordinates of the partition vectors L_{-lambda} v.
  const CMatrix& ortho(int level) const { return ortho_.at(level); }

  // Block of L_n from level k to k-n; empty when either level is out of range.
  const CMatrix& block(int n, int k) const;

  // Dense matrix of the compression of L_n to levels 0..N (zero for |n| > N).
  CMatrix lmat(int n) const;

  // out += coef * L_n * in, for column blocks in of size total_dim() x m.
  void apply_generator(int n, cplx coef, const CMatrix& in, CMatrix& out) const;

  double eigenvalue(int level) const { return params_.h + level; }
  GradedVector lowest_weight_vector() const;
  // Level index of every coordinate.
  std::vector<int> coordinate_levels() const;

  friend ModuleData build_module(const ModuleParams&, double);
  friend ModuleData module_from_json(const nlohmann::json&);

 private:
  void finalize_layout();
  void finalize_blocks();

  ModuleParams params_{};
  double nulltol_ = 1e-9;
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
  std::vector<PartitionLabel> basis_;
  std::vector<Eigen::MatrixXd> gram_;
  std::vector<CMatrix> ortho_;
  // blocks_[n + N][k]
  std::vector<std::vector<CMatrix>> blocks_;
  // Real copies of the blocks when every block is real.
  bool real_blocks_ = false;
  std::vector<std::vector<Eigen::MatrixXd>> rblocks_;
};

// Throws NonUnitaryError when some level has a gram eigenvalue below
// -nulltol * (largest eigenvalue).
ModuleData build_module(const ModuleParams& params, double nulltol = 1e-9);

// Shapovalov gram matrix of one level in double precision.
Eigen::MatrixXd gram_matrix(const ModuleParams& params, int level);

// Accepts c >= 1, h >= 0 outright; otherwise requires the level-wise positivity
// test up to params.N to pass.
bool check_unitarity(const ModuleParams& params, double nulltol = 1e-9);

// sqrt(sum_k (1+h+k)^{2n} |v_k|^2)
double sobolev_norm(const GradedVector& v, double n, const ModuleData& module);

// Vector with a random unit-norm Gaussian component in levels <= maxlevel.
template <class Rng>
GradedVector random_protected_vector(const ModuleData& module, int maxlevel, Rng& rng);

nlohmann::json module_to_json(const ModuleData& module);
ModuleData module_from_json(const nlohmann::json& doc);

}  // namespace virann

#include <random>

namespace virann {

template <class Rng>
GradedVector random_protected_vector(const ModuleData& module, int maxlevel, Rng& rng) {
  std::normal_distribution<double> gauss;
  GradedVector v = GradedVector::Zero(module.total_dim());
  const int m = module.prefix_dim(maxlevel);
  for (int i = 0; i < m; ++i) v[i] = cplx(gauss(rng), gauss(rng));
  const double nrm = v.norm();
  if (nrm > 0) v /= nrm;
  return v;
}

}  // namespace virann
