#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace virann {

// Weakly decreasing positive parts; labels the Verma vector L_{-p1}...L_{-pk} v.
struct PartitionLabel {
  std::vector<int> parts;

  int level() const;
  bool valid() const;
  std::string str() const;

  auto operator<=>(const PartitionLabel&) const = default;
  bool operator==(const PartitionLabel&) const = default;
};

// Partitions of k in reverse-lexicographic order: [k], [k-1,1], ..., [1,...,1].
std::vector<PartitionLabel> partitions_of(int k);

// All partitions of levels 0..N, grouped by ascending level.
std::vector<PartitionLabel> enumerate_basis(int N);

// Number of partitions p(k).
std::size_t partition_count(int k);

}  // namespace virann
