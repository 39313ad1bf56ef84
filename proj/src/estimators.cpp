#include "cte/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "cte/digamma.hpp"
#include "cte/rng.hpp"

namespace cte {

void JointSamples::validate() const
{
    if (y.size() != x.size() || (z && z->size() != x.size())) {
        throw std::invalid_argument("JointSamples: blocks have different sample counts");
    }
}

JointSamples JointSamples::select(std::span<const std::size_t> indices) const
{
    JointSamples out{x.select(indices), y.select(indices), std::nullopt};
    if (z) {
        out.z = z->select(indices);
    }
    return out;
}

void EstimatorConfig::validate() const
{
    if (k < 1) {
        throw std::invalid_argument("EstimatorConfig: k must be at least 1");
    }
    if (subsample_size <= k) {
        throw std::invalid_argument("EstimatorConfig: subsample size must exceed k");
    }
    if (!(jitter_intensity >= 0.0) || !std::isfinite(jitter_intensity)) {
        throw std::invalid_argument("EstimatorConfig: jitter intensity must be >= 0");
    }
}

namespace {

PointSet jitter_block(const PointSet& block, std::uint64_t seed, std::uint64_t block_id,
                      double intensity)
{
    PointSet out = block;
    for (std::size_t i = 0; i < out.size(); ++i) {
        SplitMix64Engine rng(derive_seed(seed, block_id, i));
        for (double& v : out.row(i)) {
            v += intensity * rng.uniform();
        }
    }
    return out;
}

// Local KSG terms for one sample set. For MI the term is
// psi(k) - [psi(n_x + 1) + psi(n_y + 1) - psi(N)]; for CMI it is
// psi(k) - [psi(n_xz + 1) + psi(n_yz + 1) - psi(n_z + 1)].
struct LocalTerms {
    std::vector<double> values;
    std::size_t n_zero_radius = 0;
};

LocalTerms ksg_local_terms(const JointSamples& s, std::size_t k)
{
    s.validate();
    const std::size_t n = s.size();
    if (n < k + 1) {
        throw EstimationError("KSG estimate needs at least k+1 samples (k=" + std::to_string(k) +
                              ", n=" + std::to_string(n) + ")");
    }

    LocalTerms out;
    out.values.resize(n);
    const double psi_k = digamma(static_cast<double>(k));

    if (!s.z) {
        const std::array<const PointSet*, 2> blocks{&s.x, &s.y};
        const std::array<std::size_t, 2> dims{s.x.dim(), s.y.dim()};
        const PointSet joint = hstack(blocks);
        const BlockLayout layout = BlockLayout::from_dims(dims);
        const std::array<Projection, 2> proj{0b01, 0b10};
        const NeighborCounts nc = parallel::neighbor_counts(joint, layout, proj, k);
        const double psi_n = digamma(static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            out.values[i] = psi_k - (digamma(static_cast<double>(nc.count(i, 0) + 1)) +
                                     digamma(static_cast<double>(nc.count(i, 1) + 1)) - psi_n);
            out.n_zero_radius += nc.radius[i] == 0.0 ? 1 : 0;
        }
        return out;
    }

    const std::array<const PointSet*, 3> blocks{&s.x, &s.y, &*s.z};
    const std::array<std::size_t, 3> dims{s.x.dim(), s.y.dim(), s.z->dim()};
    const PointSet joint = hstack(blocks);
    const BlockLayout layout = BlockLayout::from_dims(dims);
    // xz, yz, z
    const std::array<Projection, 3> proj{0b101, 0b110, 0b100};
    const NeighborCounts nc = parallel::neighbor_counts(joint, layout, proj, k);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = psi_k - (digamma(static_cast<double>(nc.count(i, 0) + 1)) +
                                 digamma(static_cast<double>(nc.count(i, 1) + 1)) -
                                 digamma(static_cast<double>(nc.count(i, 2) + 1)));
        out.n_zero_radius += nc.radius[i] == 0.0 ? 1 : 0;
    }
    return out;
}

double mean(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

JointSamples jitter(const JointSamples& samples, const EstimatorConfig& cfg)
{
    samples.validate();
    if (cfg.jitter_intensity == 0.0) {
        return samples;
    }
    JointSamples out{jitter_block(samples.x, cfg.seed, 0, cfg.jitter_intensity),
                     jitter_block(samples.y, cfg.seed, 1, cfg.jitter_intensity), std::nullopt};
    if (samples.z) {
        out.z = jitter_block(*samples.z, cfg.seed, 2, cfg.jitter_intensity);
    }
    return out;
}

double ksg_mi(const JointSamples& samples, const EstimatorConfig& cfg)
{
    if (samples.z) {
        throw std::invalid_argument("ksg_mi: conditioning block must be absent");
    }
    return mean(ksg_local_terms(samples, cfg.k).values);
}

double ksg_cmi(const JointSamples& samples, const EstimatorConfig& cfg)
{
    if (!samples.z) {
        throw std::invalid_argument("ksg_cmi: conditioning block is required");
    }
    return mean(ksg_local_terms(samples, cfg.k).values);
}

std::vector<double> local_cmi_all(const JointSamples& samples, const EstimatorConfig& cfg)
{
    if (!samples.z) {
        throw std::invalid_argument("local_cmi: conditioning block is required");
    }
    return ksg_local_terms(samples, cfg.k).values;
}

double local_cmi(const JointSamples& samples, std::size_t i, const EstimatorConfig& cfg)
{
    if (i >= samples.size()) {
        throw std::out_of_range("local_cmi: sample index out of range");
    }
    return local_cmi_all(samples, cfg)[i];
}

std::vector<std::vector<std::size_t>> draw_subsets(std::size_t n, const EstimatorConfig& cfg)
{
    cfg.validate();
    const std::size_t nc = cfg.subsample_size;
    if (n < nc) {
        throw EstimationError("subsampled estimate needs at least " + std::to_string(nc) +
                              " samples, got " + std::to_string(n) +
                              "; filter pairs with insufficient samples");
    }
    const std::size_t n_subsets = 2 * ((n + nc - 1) / nc);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});

    std::vector<std::vector<std::size_t>> subsets(n_subsets);
    for (std::size_t s = 0; s < n_subsets; ++s) {
        SplitMix64Engine rng(derive_seed(cfg.seed, s, 0));
        subsets[s].reserve(nc);
        std::sample(all.begin(), all.end(), std::back_inserter(subsets[s]), nc, rng);
    }
    return subsets;
}

EstimateResult subsampled_estimate(const JointSamples& samples, const EstimatorConfig& cfg,
                                   Measure which)
{
    samples.validate();
    if (which == Measure::conditional_mutual_information && !samples.z) {
        throw std::invalid_argument("subsampled_estimate: CMI requires a conditioning block");
    }
    if (which == Measure::mutual_information && samples.z) {
        throw std::invalid_argument("subsampled_estimate: MI requires no conditioning block");
    }
    const auto subsets = draw_subsets(samples.size(), cfg);

    EstimateResult result;
    result.n_samples_total = samples.size();
    result.n_subsets = subsets.size();
    result.subset_values.reserve(subsets.size());
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        EstimatorConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, s, 1);
        const JointSamples noisy = jitter(samples.select(subsets[s]), sub);
        const LocalTerms terms = ksg_local_terms(noisy, cfg.k);
        result.subset_values.push_back(mean(terms.values));
        result.n_zero_radius += terms.n_zero_radius;
    }
    result.value = mean(result.subset_values);
    return result;
}

} // namespace cte
