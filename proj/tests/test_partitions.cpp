#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "dimfree/partitions.hpp"
#include "support/generators.hpp"

using namespace dimfree;

TEST(Pairing, Examples) {
    auto p4 = pairing_partition(4);
    EXPECT_EQ(p4.to_string(), "[[1,2],[3,4]]");
    EXPECT_EQ(p4.block_count(), 2);
    EXPECT_EQ(p4.tau(), 2);

    auto p5 = pairing_partition(5);
    EXPECT_EQ(p5.to_string(), "[[1,2],[3,4],[5]]");
    EXPECT_EQ(p5.block_count(), 3);
    EXPECT_EQ(p5.tau(), 2);

    auto p1 = pairing_partition(1);
    EXPECT_EQ(p1.to_string(), "[[1]]");
    EXPECT_EQ(p1.tau(), 1);
}

TEST(Pairing, Invariants) {
    for (int k = 1; k <= 200; ++k) {
        auto p = pairing_partition(k);
        EXPECT_LE(p.tau(), 2);
        EXPECT_EQ(p.block_count(), (k + 1) / 2);
        EXPECT_EQ(p.element_count(), k);
    }
}

TEST(Pairing, SortedPairsLargestTogether) {
    auto p = sorted_pairing_partition({0.1, 5.0, 0.3, 4.0, 1.0});
    EXPECT_EQ(p.to_string(), "[[2,4],[5,3],[1]]");
}

TEST(Partition, OtherConstructors) {
    EXPECT_EQ(whole_set_partition(3).to_string(), "[[1,2,3]]");
    EXPECT_EQ(singleton_partition(3).to_string(), "[[1],[2],[3]]");
    EXPECT_EQ(whole_set_partition(3).tau(), 3);
}

TEST(Partition, LiteralRoundTrip) {
    auto p = IndexPartition::from_one_based(5, {{1, 2}, {3, 4}, {5}});
    EXPECT_EQ(p.to_string(), "[[1,2],[3,4],[5]]");
}

TEST(Partition, MalformedInputRejected) {
    auto expect_mismatch = [](auto fn) {
        try {
            fn();
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::PartitionMismatch);
        }
    };
    expect_mismatch([] { IndexPartition::from_one_based(3, {{1, 2}, {2, 3}}); }); // overlap
    expect_mismatch([] { IndexPartition::from_one_based(3, {{1, 2}}); });         // missing 3
    expect_mismatch([] { IndexPartition::from_one_based(3, {{1, 2, 3}, {}}); });  // empty block
    expect_mismatch([] { IndexPartition::from_one_based(3, {{0, 1, 2}}); });      // out of range
    expect_mismatch([] { IndexPartition::from_one_based(2, {{1, 2, 3}}); });
}

TEST(Partition, RandomValidPartitionsAccepted) {
    gen::Source src(21);
    for (int rep = 0; rep < 300; ++rep) {
        int k = src.integer(1, 30);
        std::vector<int> perm(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) perm[static_cast<size_t>(i)] = i;
        std::shuffle(perm.begin(), perm.end(), src.engine());
        std::vector<std::vector<int>> blocks;
        for (int i = 0; i < k;) {
            int len = std::min(k - i, src.integer(1, 4));
            blocks.emplace_back(perm.begin() + i, perm.begin() + i + len);
            i += len;
        }
        IndexPartition p(k, blocks);
        int tau = 0;
        for (auto& b : blocks) tau = std::max(tau, static_cast<int>(b.size()));
        EXPECT_EQ(p.tau(), tau);
        EXPECT_EQ(p.block_count(), static_cast<int>(blocks.size()));
    }
}

TEST(BlockCountCondition, Examples) {
    // rhs = ln(1e6) / ((1 + offset(2)) * 3) = 42.5625664543699736
    EXPECT_TRUE(check_block_count_condition(1, 2, 1.0, 1e6));
    EXPECT_TRUE(check_block_count_condition(42, 2, 1.0, 1e6));
    EXPECT_FALSE(check_block_count_condition(43, 2, 1.0, 1e6));
    EXPECT_FALSE(check_block_count_condition(100, 2, 1.0, 1e6));
    EXPECT_TRUE(check_block_count_condition(1000000, 2, 0.0, 2.0));
}

TEST(AzumaCountCondition, Examples) {
    // rhs = 4 * 10 / (3 * 3) = 40/9
    EXPECT_TRUE(check_azuma_count_condition(1, 1.0, 3.0, std::exp(10.0)));
    EXPECT_TRUE(check_azuma_count_condition(4, 1.0, 3.0, std::exp(10.0)));
    EXPECT_FALSE(check_azuma_count_condition(5, 1.0, 3.0, std::exp(10.0)));
    EXPECT_TRUE(check_azuma_count_condition(99, 1.0, 0.0, 2.0));
}
