#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include <omp.h>

#include "cte/knn.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace cte;

namespace {

PointSet line(std::initializer_list<double> xs)
{
    PointSet ps(1);
    for (double x : xs) {
        ps.push_back(std::array{x});
    }
    return ps;
}

} // namespace

TEST(Chebyshev, BasicValues)
{
    EXPECT_EQ(chebyshev_distance(std::array{0.0, 0.0}, std::array{0.0, 0.0}), 0.0);
    EXPECT_EQ(chebyshev_distance(std::array{1.0, 2.0, 3.0}, std::array{4.0, 0.0, 3.0}), 3.0);
}

TEST(Chebyshev, DimensionMismatchThrows)
{
    EXPECT_THROW(chebyshev_distance(std::array{1.0}, std::array{1.0, 2.0}), std::invalid_argument);
}

TEST(Chebyshev, MatchesCoordinateScan)
{
    const PointSet ps = testutil::random_points(50, 5, 11);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        const auto a = ps[i];
        const auto b = ps[i + 1];
        double expected = 0.0;
        for (std::size_t l = 0; l < 5; ++l) {
            expected = std::max(expected, std::fabs(a[l] - b[l]));
        }
        EXPECT_EQ(chebyshev_distance(a, b), expected);
    }
}

TEST(KthNeighbor, LineExamples)
{
    const PointSet ps = line({0, 1, 3, 7});
    EXPECT_EQ(kth_neighbor_radius(ps, 0, 1), 1.0);
    EXPECT_EQ(kth_neighbor_radius(ps, 0, 2), 3.0);
    EXPECT_EQ(kth_neighbor_radius(ps, 3, 3), 7.0);
}

TEST(KthNeighbor, RejectsTooLargeK)
{
    const PointSet ps = line({0, 1, 3, 7});
    EXPECT_THROW(kth_neighbor_radius(ps, 0, 4), std::invalid_argument);
    EXPECT_THROW(kth_neighbor_radius(ps, 0, 0), std::invalid_argument);
}

TEST(KthNeighbor, MatchesFullSortOracle)
{
    const PointSet ps = testutil::random_points(100, 3, 5);
    const auto rows = testutil::rows(ps);
    for (std::size_t i = 0; i < ps.size(); i += 7) {
        for (std::size_t k : {1u, 3u, 10u, 99u}) {
            EXPECT_EQ(kth_neighbor_radius(ps, i, k), oracle::kth_radius(rows, i, k));
        }
    }
}

TEST(CountWithin, Examples)
{
    const PointSet ps = line({0, 1, 3, 7});
    const auto full = SubspaceMask::full(1);
    EXPECT_EQ(count_within(ps, full, 0, 3.5), 2u);
    EXPECT_EQ(count_within(ps, full, 0, 3.0), 1u); // strict
    for (std::size_t i = 0; i < ps.size(); ++i) {
        EXPECT_EQ(count_within(ps, full, i, 0.0), 0u);
    }
    EXPECT_THROW(count_within(ps, full, 0, -1.0), std::invalid_argument);
}

TEST(CountWithin, MatchesLinearScanOracle)
{
    const PointSet ps = testutil::random_points(80, 4, 9);
    const SubspaceMask mask({1, 3}, 4);
    std::vector<oracle::Row> projected;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        projected.push_back({ps[i][1], ps[i][3]});
    }
    for (std::size_t i = 0; i < ps.size(); i += 3) {
        for (double r : {0.05, 0.2, 0.7}) {
            EXPECT_EQ(count_within(ps, mask, i, r), oracle::strict_count(projected, i, r));
        }
    }
}

TEST(SubspaceMask, Validation)
{
    EXPECT_THROW(SubspaceMask({0, 0}, 2), std::invalid_argument);
    EXPECT_THROW(SubspaceMask({2}, 2), std::invalid_argument);
    const auto u = SubspaceMask({2}, 4) | SubspaceMask({0, 2}, 4);
    EXPECT_EQ(u.indices(), (std::vector<std::size_t>{0, 2}));
}

TEST(PointSet, RejectsNonFiniteAndMismatchedRows)
{
    PointSet ps(2);
    EXPECT_THROW(ps.push_back(std::array{1.0}), std::invalid_argument);
    EXPECT_THROW(ps.push_back(std::array{1.0, std::nan("")}), std::invalid_argument);
}

// Property: strict counting at the joint k-th radius never exceeds k.
TEST(KnnProperties, StrictnessAtJointRadius)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PointSet ps = testutil::random_points(40, 3, seed);
        const auto full = SubspaceMask::full(3);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t k : {1u, 3u, 5u}) {
                EXPECT_LE(count_within(ps, full, i, kth_neighbor_radius(ps, i, k)), k);
            }
        }
    }
}

// Property: dropping coordinates from a mask can only grow the count.
TEST(KnnProperties, ProjectionMonotonicity)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PointSet ps = testutil::random_points(40, 4, 100 + seed);
        const SubspaceMask small({1}, 4);
        const SubspaceMask big({0, 1, 3}, 4);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            EXPECT_GE(count_within(ps, small, i, 0.4), count_within(ps, big, i, 0.4));
        }
    }
}

TEST(KnnProperties, PermutationInvariance)
{
    const PointSet ps = testutil::random_points(30, 2, 77);
    std::vector<std::size_t> perm(ps.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
    const PointSet shuffled = ps.select(perm);
    const auto full = SubspaceMask::full(2);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        EXPECT_EQ(kth_neighbor_radius(shuffled, j, 3), kth_neighbor_radius(ps, perm[j], 3));
        EXPECT_EQ(count_within(shuffled, full, j, 0.3), count_within(ps, full, perm[j], 0.3));
    }
}

TEST(KnnProperties, ConstantPaddingInvariance)
{
    const PointSet ps = testutil::random_points(30, 2, 8);
    PointSet padded(4);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        padded.push_back(std::array{ps[i][0], 42.0, ps[i][1], -3.5});
    }
    const auto m = SubspaceMask({0, 1}, 2);
    const auto mp = SubspaceMask({0, 1, 2, 3}, 4);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double r = kth_neighbor_radius(ps, i, 3);
        EXPECT_EQ(kth_neighbor_radius(padded, i, 3), r);
        EXPECT_EQ(count_within(padded, mp, i, r), count_within(ps, m, i, r));
    }
}

class NeighborKernel : public ::testing::TestWithParam<int> {};

TEST_P(NeighborKernel, ParallelMatchesSerialReference)
{
    omp_set_num_threads(GetParam());
    const std::array<std::size_t, 3> dims{2, 3, 1};
    const BlockLayout layout = BlockLayout::from_dims(dims);
    const PointSet joint = testutil::random_points(150, 6, 21);
    const std::array<Projection, 4> proj{0b101, 0b110, 0b100, 0b011};
    for (std::size_t k : {1u, 3u, 8u}) {
        const NeighborCounts a = serial::neighbor_counts(joint, layout, proj, k);
        const NeighborCounts b = parallel::neighbor_counts(joint, layout, proj, k);
        EXPECT_EQ(a.radius, b.radius);
        EXPECT_EQ(a.counts, b.counts);
    }
}

INSTANTIATE_TEST_SUITE_P(Threads, NeighborKernel, ::testing::Values(1, 2, 4));

TEST(NeighborKernelErrors, BadLayoutOrProjection)
{
    const PointSet joint = testutil::random_points(10, 3, 1);
    const std::array<std::size_t, 2> dims{1, 1};
    const std::array<Projection, 1> proj{0b01};
    EXPECT_THROW(parallel::neighbor_counts(joint, BlockLayout::from_dims(dims), proj, 3),
                 std::invalid_argument);
    const std::array<std::size_t, 2> ok{1, 2};
    const std::array<Projection, 1> bad{0b100};
    EXPECT_THROW(parallel::neighbor_counts(joint, BlockLayout::from_dims(ok), bad, 3),
                 std::invalid_argument);
}
