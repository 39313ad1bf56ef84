#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cte/knn.hpp"

namespace cte {

/// Joint samples (x, y) or (x, y, z) with one row per sample in each block.
/// For transfer entropy x holds the target's future, y the source's past and
/// z the target's past.
struct JointSamples {
    PointSet x;
    PointSet y;
    std::optional<PointSet> z;

    std::size_t size() const noexcept { return x.size(); }
    bool conditional() const noexcept { return z.has_value(); }

    /// Throws std::invalid_argument if the blocks disagree on sample count.
    void validate() const;
    JointSamples select(std::span<const std::size_t> indices) const;
};

struct EstimatorConfig {
    std::size_t k = 3;
    double jitter_intensity = 1e-10;
    std::size_t subsample_size = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EstimateResult {
    double value = 0.0; // nats; mean of subset_values
    std::size_t n_subsets = 0;
    std::vector<double> subset_values;
    std::size_t n_samples_total = 0;
    /// Samples whose k-th neighbor radius was exactly zero (duplicates that
    /// survived jitter). Such samples contribute strict counts of zero.
    std::size_t n_zero_radius = 0;
};

/// Raised when there are too few samples for an estimate.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Measure { mutual_information, conditional_mutual_information };

/// Adds independent uniform noise on [0, jitter_intensity) to every
/// coordinate. The draw for a coordinate depends only on (seed, block, row,
/// coordinate position), so appending coordinates does not disturb the
/// perturbation of existing ones.
JointSamples jitter(const JointSamples& samples, const EstimatorConfig& cfg);

/// KSG mutual information between x and y (z must be absent). Uses cfg.k
/// only; apply jitter() beforehand when ties are possible.
double ksg_mi(const JointSamples& samples, const EstimatorConfig& cfg);

/// KSG conditional mutual information I(x; y | z). With x = target future,
/// y = source past, z = target past this is the transfer entropy y -> x.
double ksg_cmi(const JointSamples& samples, const EstimatorConfig& cfg);

/// Contribution of sample i to ksg_cmi.
double local_cmi(const JointSamples& samples, std::size_t i, const EstimatorConfig& cfg);

/// Contributions of every sample to ksg_cmi; their mean is ksg_cmi.
std::vector<double> local_cmi_all(const JointSamples& samples, const EstimatorConfig& cfg);

/// Index sets used by subsampled_estimate: 2 * ceil(n / subsample_size)
/// subsets, each drawn without replacement and independently of the others.
std::vector<std::vector<std::size_t>> draw_subsets(std::size_t n, const EstimatorConfig& cfg);

/// Averages the chosen estimator over jittered random subsets of size
/// cfg.subsample_size. Throws EstimationError when fewer samples than that
/// are available; callers should filter such inputs first.
EstimateResult subsampled_estimate(const JointSamples& samples, const EstimatorConfig& cfg,
                                   Measure which);

} // namespace cte
