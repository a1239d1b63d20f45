#include "virann/partition.hpp"

#include <numeric>
#include <stdexcept>

namespace virann {

int PartitionLabel::level() const { return std::accumulate(parts.begin(), parts.end(), 0); }

bool PartitionLabel::valid() const {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 1) return false;
    if (i > 0 && parts[i] > parts[i - 1]) return false;
  }
  return true;
}

std::string PartitionLabel::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts[i]);
  }
  return s + "]";
}

namespace {

void fill(int remaining, int maxpart, std::vector<int>& cur, std::vector<PartitionLabel>& out) {
  if (remaining == 0) {
    out.push_back(PartitionLabel{cur});
    return;
  }
  for (int p = std::min(remaining, maxpart); p >= 1; --p) {
    cur.push_back(p);
    fill(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<PartitionLabel> partitions_of(int k) {
  if (k < 0) throw std::invalid_argument("partitions_of: negative level");
  std::vector<PartitionLabel> out;
  std::vector<int> cur;
  fill(k, k, cur, out);
  return out;
}

std::vector<PartitionLabel> enumerate_basis(int N) {
  if (N < 0) throw std::invalid_argument("enumerate_basis: negative cutoff");
  std::vector<PartitionLabel> out;
  for (int k = 0; k <= N; ++k) {
    auto lv = partitions_of(k);
    out.insert(out.end(), lv.begin(), lv.end());
  }
  return out;
}

std::size_t partition_count(int k) {
  if (k < 0) return 0;
  // Euler's pentagonal recurrence.
  std::vector<std::size_t> p(k + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= k; ++n) {
    long long acc = 0;
    for (int j = 1;; ++j) {
      int g1 = j * (3 * j - 1) / 2;
      int g2 = j * (3 * j + 1) / 2;
      if (g1 > n) break;
      long long sign = (j % 2) ? 1 : -1;
      acc += sign * static_cast<long long>(p[n - g1]);
      if (g2 <= n) acc += sign * static_cast<long long>(p[n - g2]);
    }
    p[n] = static_cast<std::size_t>(acc);
  }
  return p[k];
}

}  // namespace virann
