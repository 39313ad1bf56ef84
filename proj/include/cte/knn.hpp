#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cte {

/// A set of points of equal dimension stored row-major in one buffer.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim);
    /// Takes ownership of `data`, which must hold `n * dim` finite values.
    PointSet(std::size_t n, std::size_t dim, std::vector<double> data);

    static PointSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return dim_ == 0 ? n_ : data_.size() / dim_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return size() == 0; }

    std::span<const double> operator[](std::size_t i) const noexcept
    {
        return {data_.data() + i * dim_, dim_};
    }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }

    void push_back(std::span<const double> point);
    void reserve(std::size_t n) { data_.reserve(n * dim_); }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    /// Rows selected by `indices`, in that order.
    PointSet select(std::span<const std::size_t> indices) const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::size_t dim_ = 0;
    std::size_t n_ = 0; // only meaningful when dim_ == 0
    std::vector<double> data_;
};

/// Side-by-side concatenation of point sets with equal row counts.
PointSet hstack(std::span<const PointSet* const> blocks);

/// Coordinate positions defining a projection of a PointSet.
class SubspaceMask {
public:
    /// Indices must be distinct and lie in [0, dim).
    SubspaceMask(std::vector<std::size_t> indices, std::size_t dim);

    static SubspaceMask full(std::size_t dim);
    static SubspaceMask range(std::size_t begin, std::size_t end, std::size_t dim);

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t dim() const noexcept { return dim_; }

    /// Union of two masks over the same dimension (sorted).
    friend SubspaceMask operator|(const SubspaceMask& a, const SubspaceMask& b);

private:
    std::vector<std::size_t> indices_;
    std::size_t dim_;
};

/// Max-norm distance.
double chebyshev_distance(std::span<const double> a, std::span<const double> b);
/// Max-norm distance restricted to the coordinates in `mask`.
double chebyshev_distance(std::span<const double> a, std::span<const double> b,
                          const SubspaceMask& mask);

/// Distance from point i to its k-th nearest other point (i itself excluded).
double kth_neighbor_radius(const PointSet& ps, std::size_t i, std::size_t k);

/// Number of points j != i whose projected distance to i is strictly less
/// than `radius`.
std::size_t count_within(const PointSet& ps, const SubspaceMask& mask, std::size_t i,
                         double radius);

/// Contiguous coordinate blocks of a joint space: block b covers
/// [offsets[b], offsets[b + 1]).
struct BlockLayout {
    std::vector<std::size_t> offsets;

    static BlockLayout from_dims(std::span<const std::size_t> dims);
    std::size_t n_blocks() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::size_t dim() const noexcept { return offsets.empty() ? 0 : offsets.back(); }
    SubspaceMask mask(std::uint32_t projection) const;
};

/// Bitmask over blocks of a BlockLayout; bit b selects block b.
using Projection = std::uint32_t;

/// Per-point k-th-neighbor radius in the joint space plus strict counts in
/// each requested projection at that radius.
struct NeighborCounts {
    std::size_t n_projections = 0;
    std::vector<double> radius;
    std::vector<std::size_t> counts; // row-major [point][projection]

    std::size_t count(std::size_t i, std::size_t p) const noexcept
    {
        return counts[i * n_projections + p];
    }
};

namespace serial {

/// Reference implementation: one kth_neighbor_radius and one count_within
/// call per point and projection.
NeighborCounts neighbor_counts(const PointSet& joint, const BlockLayout& layout,
                               std::span<const Projection> projections, std::size_t k);

} // namespace serial

namespace parallel {

/// Fused kernel: per-block distances are computed once per pair and reused
/// for the radius and every projection. Points are distributed over OpenMP
/// threads; output is identical to serial::neighbor_counts. Runs single
/// threaded when called from inside an active parallel region.
NeighborCounts neighbor_counts(const PointSet& joint, const BlockLayout& layout,
                               std::span<const Projection> projections, std::size_t k);

} // namespace parallel

} // namespace cte
