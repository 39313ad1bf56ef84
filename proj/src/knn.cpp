#include "cte/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace cte {

namespace {

void require_finite(std::span<const double> values)
{
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("PointSet: non-finite coordinate");
        }
    }
}

void check_k(const PointSet& ps, std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    if (k >= ps.size()) {
        throw std::invalid_argument("k-th neighbor query needs at least k+1 points (k=" +
                                    std::to_string(k) + ", n=" + std::to_string(ps.size()) +
                                    ")");
    }
}

} // namespace

PointSet::PointSet(std::size_t dim) : dim_(dim) {}

PointSet::PointSet(std::size_t n, std::size_t dim, std::vector<double> data)
    : dim_(dim), n_(n), data_(std::move(data))
{
    if (data_.size() != n * dim) {
        throw std::invalid_argument("PointSet: buffer size does not match n * dim");
    }
    require_finite(data_);
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty()) {
        return PointSet{};
    }
    PointSet ps(rows.front().size());
    ps.reserve(rows.size());
    for (const auto& r : rows) {
        ps.push_back(r);
    }
    return ps;
}

void PointSet::push_back(std::span<const double> point)
{
    if (point.size() != dim_) {
        throw std::invalid_argument("PointSet: dimension mismatch (expected " +
                                    std::to_string(dim_) + ", got " +
                                    std::to_string(point.size()) + ")");
    }
    require_finite(point);
    data_.insert(data_.end(), point.begin(), point.end());
    ++n_;
}

PointSet PointSet::select(std::span<const std::size_t> indices) const
{
    PointSet out(dim_);
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) {
            throw std::out_of_range("PointSet::select: index out of range");
        }
        auto r = (*this)[i];
        out.data_.insert(out.data_.end(), r.begin(), r.end());
        ++out.n_;
    }
    return out;
}

PointSet hstack(std::span<const PointSet* const> blocks)
{
    if (blocks.empty()) {
        return PointSet{};
    }
    const std::size_t n = blocks.front()->size();
    std::size_t dim = 0;
    for (const PointSet* b : blocks) {
        if (b->size() != n) {
            throw std::invalid_argument("hstack: blocks have different sample counts");
        }
        dim += b->dim();
    }
    std::vector<double> data;
    data.reserve(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (const PointSet* b : blocks) {
            auto r = (*b)[i];
            data.insert(data.end(), r.begin(), r.end());
        }
    }
    return PointSet(n, dim, std::move(data));
}

SubspaceMask::SubspaceMask(std::vector<std::size_t> indices, std::size_t dim)
    : indices_(std::move(indices)), dim_(dim)
{
    for (std::size_t idx : indices_) {
        if (idx >= dim_) {
            throw std::invalid_argument("SubspaceMask: index outside [0, dim)");
        }
    }
    auto sorted = indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("SubspaceMask: duplicate index");
    }
}

SubspaceMask SubspaceMask::full(std::size_t dim) { return range(0, dim, dim); }

SubspaceMask SubspaceMask::range(std::size_t begin, std::size_t end, std::size_t dim)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = begin; i < end; ++i) {
        idx.push_back(i);
    }
    return SubspaceMask(std::move(idx), dim);
}

SubspaceMask operator|(const SubspaceMask& a, const SubspaceMask& b)
{
    if (a.dim_ != b.dim_) {
        throw std::invalid_argument("SubspaceMask union: dimension mismatch");
    }
    std::vector<std::size_t> idx = a.indices_;
    idx.insert(idx.end(), b.indices_.begin(), b.indices_.end());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return SubspaceMask(std::move(idx), a.dim_);
}

double chebyshev_distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("chebyshev_distance: dimension mismatch");
    }
    double d = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        d = std::max(d, std::abs(a[l] - b[l]));
    }
    return d;
}

double chebyshev_distance(std::span<const double> a, std::span<const double> b,
                          const SubspaceMask& mask)
{
    if (a.size() != b.size() || a.size() != mask.dim()) {
        throw std::invalid_argument("chebyshev_distance: dimension mismatch");
    }
    double d = 0.0;
    for (std::size_t l : mask.indices()) {
        d = std::max(d, std::abs(a[l] - b[l]));
    }
    return d;
}

double kth_neighbor_radius(const PointSet& ps, std::size_t i, std::size_t k)
{
    check_k(ps, k);
    if (i >= ps.size()) {
        throw std::out_of_range("kth_neighbor_radius: index out of range");
    }
    std::vector<double> dist;
    dist.reserve(ps.size() - 1);
    for (std::size_t j = 0; j < ps.size(); ++j) {
        if (j != i) {
            dist.push_back(chebyshev_distance(ps[i], ps[j]));
        }
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    return dist[k - 1];
}

std::size_t count_within(const PointSet& ps, const SubspaceMask& mask, std::size_t i,
                         double radius)
{
    if (i >= ps.size()) {
        throw std::out_of_range("count_within: index out of range");
    }
    if (!(radius >= 0.0)) {
        throw std::invalid_argument("count_within: radius must be nonnegative");
    }
    if (mask.dim() != ps.dim()) {
        throw std::invalid_argument("count_within: mask dimension mismatch");
    }
    std::size_t n = 0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        if (j != i && chebyshev_distance(ps[i], ps[j], mask) < radius) {
            ++n;
        }
    }
    return n;
}

BlockLayout BlockLayout::from_dims(std::span<const std::size_t> dims)
{
    BlockLayout layout;
    layout.offsets.push_back(0);
    for (std::size_t d : dims) {
        layout.offsets.push_back(layout.offsets.back() + d);
    }
    return layout;
}

SubspaceMask BlockLayout::mask(Projection projection) const
{
    std::vector<std::size_t> idx;
    for (std::size_t b = 0; b < n_blocks(); ++b) {
        if (projection & (Projection{1} << b)) {
            for (std::size_t l = offsets[b]; l < offsets[b + 1]; ++l) {
                idx.push_back(l);
            }
        }
    }
    return SubspaceMask(std::move(idx), dim());
}

namespace {

void check_layout(const PointSet& joint, const BlockLayout& layout,
                  std::span<const Projection> projections)
{
    if (layout.dim() != joint.dim()) {
        throw std::invalid_argument("neighbor_counts: layout does not cover the joint space");
    }
    if (layout.n_blocks() > 32) {
        throw std::invalid_argument("neighbor_counts: at most 32 blocks supported");
    }
    const Projection all = layout.n_blocks() == 32
                               ? ~Projection{0}
                               : (Projection{1} << layout.n_blocks()) - 1;
    for (Projection p : projections) {
        if (p == 0 || (p & ~all) != 0) {
            throw std::invalid_argument("neighbor_counts: invalid projection mask");
        }
    }
}

} // namespace

namespace serial {

NeighborCounts neighbor_counts(const PointSet& joint, const BlockLayout& layout,
                               std::span<const Projection> projections, std::size_t k)
{
    check_layout(joint, layout, projections);
    check_k(joint, k);
    std::vector<SubspaceMask> masks;
    for (Projection p : projections) {
        masks.push_back(layout.mask(p));
    }
    const std::size_t n = joint.size();
    NeighborCounts out;
    out.n_projections = projections.size();
    out.radius.resize(n);
    out.counts.resize(n * projections.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.radius[i] = kth_neighbor_radius(joint, i, k);
        for (std::size_t p = 0; p < masks.size(); ++p) {
            out.counts[i * masks.size() + p] = count_within(joint, masks[p], i, out.radius[i]);
        }
    }
    return out;
}

} // namespace serial

namespace parallel {

NeighborCounts neighbor_counts(const PointSet& joint, const BlockLayout& layout,
                               std::span<const Projection> projections, std::size_t k)
{
    check_layout(joint, layout, projections);
    check_k(joint, k);
    const std::size_t n = joint.size();
    const std::size_t dim = joint.dim();
    const std::size_t nb = layout.n_blocks();
    const std::size_t np = projections.size();
    const double* data = joint.data().data();
    const std::size_t* off = layout.offsets.data();

    NeighborCounts out;
    out.n_projections = np;
    out.radius.resize(n);
    out.counts.assign(n * np, 0);

    const bool nested = omp_in_parallel() != 0;
#pragma omp parallel if (!nested)
    {
        // block_dist[b * n + j]: distance from the current point to j in block b.
        std::vector<double> block_dist(nb * n);
        std::vector<double> joint_dist(n);
        std::vector<double> proj_dist(n);
        std::vector<double> scratch;
        scratch.reserve(n);

#pragma omp for schedule(static)
        for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const double* pi = data + i * dim;
            for (std::size_t j = 0; j < n; ++j) {
                const double* pj = data + j * dim;
                double dj = 0.0;
                for (std::size_t b = 0; b < nb; ++b) {
                    double db = 0.0;
                    for (std::size_t l = off[b]; l < off[b + 1]; ++l) {
                        db = std::max(db, std::abs(pi[l] - pj[l]));
                    }
                    block_dist[b * n + j] = db;
                    dj = std::max(dj, db);
                }
                joint_dist[j] = dj;
            }

            scratch.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    scratch.push_back(joint_dist[j]);
                }
            }
            std::nth_element(scratch.begin(),
                             scratch.begin() + static_cast<std::ptrdiff_t>(k - 1), scratch.end());
            const double eps = scratch[k - 1];
            out.radius[i] = eps;

            for (std::size_t p = 0; p < np; ++p) {
                std::fill(proj_dist.begin(), proj_dist.end(), 0.0);
                for (std::size_t b = 0; b < nb; ++b) {
                    if (projections[p] & (Projection{1} << b)) {
                        const double* bd = block_dist.data() + b * n;
                        for (std::size_t j = 0; j < n; ++j) {
                            proj_dist[j] = std::max(proj_dist[j], bd[j]);
                        }
                    }
                }
                std::size_t c = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    c += proj_dist[j] < eps ? 1 : 0;
                }
                // i itself is at distance 0 < eps unless eps == 0
                c -= eps > 0.0 ? 1 : 0;
                out.counts[i * np + p] = c;
            }
        }
    }
    return out;
}

} // namespace parallel

} // namespace cte
