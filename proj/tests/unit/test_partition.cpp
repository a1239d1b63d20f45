#include <gtest/gtest.h>

#include <virann/partition.hpp>

using namespace virann;

TEST(Partition, CountsMatchEulerSequence) {
  const std::size_t expect[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627};
  for (int k = 0; k <= 20; ++k) {
    EXPECT_EQ(partition_count(k), expect[k]) << k;
    EXPECT_EQ(partitions_of(k).size(), expect[k]) << k;
  }
}

TEST(Partition, ReverseLexicographicOrder) {
  const auto p = partitions_of(4);
  ASSERT_EQ(p.size(), 5u);
  EXPECT_EQ(p[0].parts, (std::vector<int>{4}));
  EXPECT_EQ(p[1].parts, (std::vector<int>{3, 1}));
  EXPECT_EQ(p[2].parts, (std::vector<int>{2, 2}));
  EXPECT_EQ(p[3].parts, (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(p[4].parts, (std::vector<int>{1, 1, 1, 1}));
}

TEST(Partition, EnumerateBasisGroupsByLevel) {
  const auto b = enumerate_basis(6);
  EXPECT_EQ(b.size(), 1u + 1 + 2 + 3 + 5 + 7 + 11);
  EXPECT_TRUE(b.front().parts.empty());
  for (std::size_t i = 1; i < b.size(); ++i) {
    EXPECT_LE(b[i - 1].level(), b[i].level());
    EXPECT_TRUE(b[i].valid());
  }
}

TEST(Partition, ValidityAndLabels) {
  EXPECT_TRUE((PartitionLabel{{3, 1, 1}}).valid());
  EXPECT_FALSE((PartitionLabel{{1, 3}}).valid());
  EXPECT_FALSE((PartitionLabel{{2, 0}}).valid());
  EXPECT_EQ((PartitionLabel{{3, 1, 1}}).level(), 5);
  EXPECT_EQ(PartitionLabel{}.level(), 0);
}
