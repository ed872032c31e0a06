#include <gtest/gtest.h>

#include "bcvh/bench.hpp"

using namespace bcvh;

namespace {

TEST(BenchLedger, SinglePositionWorks) {
    auto row = bench_ledger(1, 9, 200);
    EXPECT_EQ(row.positions, 1u);
    // medians exist even for one update; retrieval returned the sole view
    EXPECT_GE(row.retrieval_ns_median, 0u);
}

TEST(BenchLedger, RetrievalStaysNearConstantAcrossLedgerSizes) {
    auto small = bench_ledger(40, 1234);
    auto large = bench_ledger(500, 1234);
    ASSERT_GT(small.retrieval_ns_median, 0u);
    // constant-time map lookup: generous 3x window for wall-clock jitter
    EXPECT_LE(static_cast<double>(large.retrieval_ns_median),
              3.0 * static_cast<double>(small.retrieval_ns_median) + 200.0);
}

TEST(BenchLedger, TableShapeRows) {
    for (size_t n : {40, 200, 500}) {
        auto row = bench_ledger(n, 7);
        EXPECT_EQ(row.positions, n);
        EXPECT_GT(row.update_ns_median, 0u);
    }
}

}  // namespace
