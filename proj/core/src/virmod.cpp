#include "virann/virmod.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "virann/json_io.hpp"
#include "virann/shapovalov.hpp"

namespace virann {

namespace {

const CMatrix& empty_block() {
  static const CMatrix e;
  return e;
}

}  // namespace

int ModuleData::prefix_dim(int level) const {
  if (level < 0) return 0;
  if (level >= params_.N) return total_;
  return offsets_[level + 1];
}

const CMatrix& ModuleData::block(int n, int k) const {
  const int N = params_.N;
  if (n < -N || n > N || k < 0 || k > N || k - n < 0 || k - n > N) return empty_block();
  return blocks_[n + N][k];
}

CMatrix ModuleData::lmat(int n) const {
  CMatrix out = CMatrix::Zero(total_, total_);
  for (int k = 0; k <= params_.N; ++k) {
    const CMatrix& b = block(n, k);
    if (b.size() == 0) continue;
    out.block(offsets_[k - n], offsets_[k], b.rows(), b.cols()) = b;
  }
  return out;
}

void ModuleData::apply_generator(int n, cplx coef, const CMatrix& in, CMatrix& out) const {
  if (coef == cplx(0)) return;
  const int N = params_.N;
  const Eigen::Index cols = in.cols();
  Eigen::MatrixXd re, im;
  for (int k = std::max(0, n); k <= std::min(N, N + n); ++k) {
    const CMatrix& b = block(n, k);
    if (b.size() == 0) continue;
    if (n == 0) {
      out.middleRows(offsets_[k], dims_[k]) += (coef * (params_.h + k)) * in.middleRows(offsets_[k], dims_[k]);
    } else if (real_blocks_) {
      using Strided = Eigen::Map<const Eigen::MatrixXd, 0, Eigen::Stride<Eigen::Dynamic, 2>>;
      const Eigen::Stride<Eigen::Dynamic, 2> stride(2 * in.rows(), 2);
      const double* base = reinterpret_cast<const double*>(in.data()) + 2 * offsets_[k];
      const Eigen::MatrixXd& rb = rblocks_[n + N][k];
      re.noalias() = rb * Strided(base, dims_[k], cols, stride);
      im.noalias() = rb * Strided(base + 1, dims_[k], cols, stride);
      auto o = out.middleRows(offsets_[k - n], dims_[k - n]);
      o.real() += coef.real() * re - coef.imag() * im;
      o.imag() += coef.real() * im + coef.imag() * re;
    } else {
      out.middleRows(offsets_[k - n], dims_[k - n]).noalias() += coef * (b * in.middleRows(offsets_[k], dims_[k]));
    }
  }
}

void ModuleData::finalize_blocks() {
  real_blocks_ = true;
  for (const auto& row : blocks_)
    for (const auto& b : row)
      if (b.size() > 0 && b.imag().cwiseAbs().maxCoeff() != 0.0) real_blocks_ = false;
  rblocks_.clear();
  if (!real_blocks_) return;
  rblocks_.resize(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    rblocks_[i].resize(blocks_[i].size());
    for (std::size_t k = 0; k < blocks_[i].size(); ++k) rblocks_[i][k] = blocks_[i][k].real();
  }
}

GradedVector ModuleData::lowest_weight_vector() const {
  GradedVector v = GradedVector::Zero(total_);
  v[0] = 1.0;
  return v;
}

std::vector<int> ModuleData::coordinate_levels() const {
  std::vector<int> lv;
  lv.reserve(total_);
  for (int k = 0; k <= params_.N; ++k) lv.insert(lv.end(), dims_[k], k);
  return lv;
}

void ModuleData::finalize_layout() {
  offsets_.assign(params_.N + 2, 0);
  for (int k = 0; k <= params_.N; ++k) offsets_[k + 1] = offsets_[k] + dims_[k];
  total_ = offsets_[params_.N + 1];
}

ModuleData build_module(const ModuleParams& params, double nulltol) {
  if (params.N < 0) throw DomainError("build_module: negative cutoff");
  if (!(params.c >= 0) || !(params.h >= 0)) throw DomainError("build_module: require c >= 0 and h >= 0");
  const int N = params.N;
  const double c = params.c;
  const double h = params.h;

  ModuleData m;
  m.params_ = params;
  m.nulltol_ = nulltol;
  m.basis_ = enumerate_basis(N);
  m.dims_.assign(N + 1, 0);
  m.dims_[0] = 1;
  m.blocks_.assign(2 * N + 1, std::vector<CMatrix>(N + 1));

  // Real blocks during construction; lowering[a][k] is L_{-a}: level k-a -> k.
  std::vector<std::vector<Eigen::MatrixXd>> raising(N + 1, std::vector<Eigen::MatrixXd>(N + 1));
  auto L = [&](int n, int k) -> Eigen::MatrixXd {
    // L_n from level k to k-n, levels < current
    const int tgt = k - n;
    if (k < 0 || tgt < 0) return Eigen::MatrixXd();
    if (n == 0) return (h + k) * Eigen::MatrixXd::Identity(m.dims_[k], m.dims_[k]);
    if (n > 0) return raising[n][k];
    return raising[-n][tgt].transpose();
  };
  auto zero = [&](int r, int cl) { return Eigen::MatrixXd::Zero(r, cl); };

  for (int k = 1; k <= N; ++k) {
    struct Family {
      int a;
      int src;
      int offset;
    };
    std::vector<Family> fams;
    int ncand = 0;
    for (int a : {1, 2}) {
      if (k - a >= 0 && m.dims_[k - a] > 0) {
        fams.push_back({a, k - a, ncand});
        ncand += m.dims_[k - a];
      }
    }
    // <L_{-a}u, L_{-b}w> = <u, (L_{-b} L_a + (a+b) L_{a-b} + central) w>
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ncand, ncand);
    for (const auto& fa : fams) {
      for (const auto& fb : fams) {
        const int a = fa.a, b = fb.a;
        const int du = m.dims_[fa.src], dw = m.dims_[fb.src];
        Eigen::MatrixXd blk = zero(du, dw);
        const int mid = fb.src - a;
        if (mid >= 0 && m.dims_[mid] > 0) blk += L(-b, mid) * L(a, fb.src);
        blk += (a + b) * L(a - b, fb.src);
        if (a == b) blk += c * (a * a * a - a) / 12.0 * Eigen::MatrixXd::Identity(du, dw);
        K.block(fa.offset, fb.offset, du, dw) = blk;
      }
    }
    Eigen::MatrixXd T(ncand, 0);
    if (ncand > 0) {
      K = 0.5 * (K + K.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
      const auto& w = es.eigenvalues();
      const double wmax = w.maxCoeff();
      const double scale = std::max(wmax, 0.0);
      if (w.minCoeff() < -nulltol * std::max(scale, 1e-300) && w.minCoeff() < 0) {
        throw NonUnitaryError("build_module: negative norm at level " + std::to_string(k) + " (eigenvalue " +
                                  std::to_string(w.minCoeff()) + ")",
                              k, w.minCoeff());
      }
      std::vector<int> keep;
      for (int i = ncand - 1; i >= 0; --i)
        if (wmax > 0 && w[i] > nulltol * wmax) keep.push_back(i);
      T.resize(ncand, static_cast<Eigen::Index>(keep.size()));
      for (std::size_t j = 0; j < keep.size(); ++j)
        T.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(w[keep[j]]);
    }
    const int dk = static_cast<int>(T.cols());
    m.dims_[k] = dk;

    // L_n L_{-a} u = L_{-a} L_n u + (n+a) L_{n-a} u + central * u
    for (int n = 1; n <= k; ++n) {
      const int tgt = k - n;
      Eigen::MatrixXd out = zero(m.dims_[tgt], ncand);
      for (const auto& fa : fams) {
        const int a = fa.a;
        const int du = m.dims_[fa.src];
        Eigen::MatrixXd blk = zero(m.dims_[tgt], du);
        const int mid = fa.src - n;
        if (mid >= 0 && m.dims_[mid] > 0) blk += L(-a, mid) * L(n, fa.src);
        blk += (n + a) * L(n - a, fa.src);
        if (n == a) blk += c * (n * n * n - n) / 12.0 * Eigen::MatrixXd::Identity(m.dims_[tgt], du);
        out.middleCols(fa.offset, du) = blk;
      }
      raising[n][k] = out * T;
    }
  }

  for (int n = 1; n <= N; ++n) {
    for (int k = n; k <= N; ++k) {
      CMatrix b = raising[n][k].cast<cplx>();
      m.blocks_[N - n][k - n] = b.adjoint();
      m.blocks_[N + n][k] = std::move(b);
    }
  }
  for (int k = 0; k <= N; ++k)
    m.blocks_[N][k] = (h + k) * CMatrix::Identity(m.dims_[k], m.dims_[k]);
  m.finalize_layout();
  m.finalize_blocks();

  // Orthonormal coordinates of L_{-lambda} v, built by applying lowering blocks.
  m.ortho_.resize(N + 1);
  m.gram_.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    auto parts = partitions_of(k);
    CMatrix X = CMatrix::Zero(m.dims_[k], static_cast<Eigen::Index>(parts.size()));
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (m.dims_[k] == 0) break;
      if (k == 0) {
        X(0, 0) = 1.0;
        continue;
      }
      PartitionLabel rest{std::vector<int>(parts[j].parts.begin() + 1, parts[j].parts.end())};
      const int a = parts[j].parts.front();
      const auto rest_parts = partitions_of(k - a);
      const auto pos = std::find(rest_parts.begin(), rest_parts.end(), rest) - rest_parts.begin();
      if (m.dims_[k - a] == 0) continue;
      X.col(static_cast<Eigen::Index>(j)) = m.block(-a, k - a) * m.ortho_[k - a].col(pos);
    }
    m.ortho_[k] = std::move(X);
    auto g = gram_table<double>(c, h, k);
    Eigen::MatrixXd G(g.size(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) G(i, j) = g[i][j];
    m.gram_[k] = std::move(G);
  }
  return m;
}

Eigen::MatrixXd gram_matrix(const ModuleParams& params, int level) {
  if (level < 0 || level > params.N) throw DomainError("gram_matrix: level outside 0..N");
  auto g = gram_table<double>(params.c, params.h, level);
  Eigen::MatrixXd G(g.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) G(i, j) = g[i][j];
  return G;
}

bool check_unitarity(const ModuleParams& params, double nulltol) {
  if (params.c < 0 || params.h < 0) return false;
  if (params.c >= 1.0) return true;
  try {
    build_module(params, nulltol);
  } catch (const NonUnitaryError&) {
    return false;
  }
  return true;
}

double sobolev_norm(const GradedVector& v, double n, const ModuleData& module) {
  if (v.size() != module.total_dim()) throw DomainError("sobolev_norm: vector size does not match module");
  double acc = 0.0;
  for (int k = 0; k <= module.cutoff(); ++k) {
    const double w = std::pow(1.0 + module.h() + k, 2.0 * n);
    acc += w * v.segment(module.offset(k), module.dim(k)).squaredNorm();
  }
  return std::sqrt(acc);
}

nlohmann::json module_to_json(const ModuleData& module) {
  nlohmann::json doc;
  doc["c"] = module.c();
  doc["h"] = module.h();
  doc["N"] = module.cutoff();
  doc["nulltol"] = module.nulltol();
  doc["dims"] = module.dims();
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& p : module.basis()) basis.push_back(p.parts);
  doc["basis"] = std::move(basis);
  nlohmann::json lm = nlohmann::json::object();
  for (int n = -module.cutoff(); n <= module.cutoff(); ++n) lm[std::to_string(n)] = matrix_to_json(module.lmat(n));
  doc["lmat"] = std::move(lm);
  return doc;
}

ModuleData module_from_json(const nlohmann::json& doc) {
  ModuleData m;
  try {
    m.params_.c = doc.at("c").get<double>();
    m.params_.h = doc.at("h").get<double>();
    m.params_.N = doc.at("N").get<int>();
    m.nulltol_ = doc.value("nulltol", 1e-9);
    m.dims_ = doc.at("dims").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("module document: ") + e.what());
  }
  const int N = m.params_.N;
  if (N < 0 || static_cast<int>(m.dims_.size()) != N + 1) throw DomainError("module document: dims must have N+1 entries");
  m.finalize_layout();
  m.basis_ = enumerate_basis(N);
  m.blocks_.assign(2 * N + 1, std::vector<CMatrix>(N + 1));
  const auto& lm = doc.at("lmat");
  for (int n = -N; n <= N; ++n) {
    const std::string key = std::to_string(n);
    if (!lm.contains(key)) throw DomainError("module document: missing lmat entry " + key);
    CMatrix full = matrix_from_json(lm.at(key));
    if (full.rows() != m.total_ || full.cols() != m.total_) throw DomainError("module document: lmat " + key + " has wrong shape");
    for (int k = std::max(0, n); k <= std::min(N, N + n); ++k)
      m.blocks_[n + N][k] = full.block(m.offsets_[k - n], m.offsets_[k], m.dims_[k - n], m.dims_[k]);
  }
  m.finalize_blocks();
  m.ortho_.resize(N + 1);
  m.gram_.resize(N + 1);
  return m;
}

}  // namespace virann
