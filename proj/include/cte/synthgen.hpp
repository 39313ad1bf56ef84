#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cte/estimators.hpp"
#include "cte/triples.hpp"

namespace cte {

/// Multivariate Gaussian split into x, y and (optionally, dz > 0) z blocks.
struct GaussianSpec {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    std::size_t dx = 1;
    std::size_t dy = 1;
    std::size_t dz = 0;

    /// Throws std::invalid_argument unless the covariance is symmetric
    /// positive definite and the block sizes cover it.
    void validate() const;

    /// Three scalar variables with covariance [[4,3,1],[3,4,1],[1,1,2]]:
    /// X and Y strongly correlated, Z weakly correlated with both.
    static GaussianSpec three_variable_example();
};

/// n i.i.d. draws (Cholesky factor times standard normals). Row i uses its
/// own derived seed, so the draws do not depend on evaluation order.
JointSamples gaussian_samples(const GaussianSpec& spec, std::size_t n, std::uint64_t seed);

/// Exact I(X;Y|Z) in nats: 0.5 ln(|S_xz| |S_yz| / (|S_z| |S|)).
/// With dz == 0 this reduces to analytic_gaussian_mi.
double analytic_gaussian_cmi(const GaussianSpec& spec);

/// Exact I(X;Y) in nats over the x-y block: 0.5 ln(|S_x| |S_y| / |S_xy|).
double analytic_gaussian_mi(const GaussianSpec& spec);

/// Appends `extra_per_block` independent N(0, sigma^2) coordinates to every
/// block. sigma == 0 appends constant zeros.
JointSamples pad_noise_dims(const JointSamples& samples, std::size_t extra_per_block, double sigma,
                            std::uint64_t seed);

/// Permutes the rows of y with one random permutation and the rows of z
/// with an independent one; x is untouched. For n >= 2 the y permutation is
/// never the identity.
JointSamples permute_null(const JointSamples& samples, std::uint64_t seed);

struct PlantedEdge {
    std::size_t source = 0;
    std::size_t target = 0;
    double p = 0.0; // probability that the target's next event copies the source
};

struct PlantedNetworkSpec {
    std::size_t n_users = 20;
    std::vector<PlantedEdge> edges;
    std::size_t topic_dim = 10;
    std::size_t active_topics = 3;  // topics a background user mostly draws from
    std::size_t events_per_user = 300;
    double noise_scale = 0.02;      // std of Gaussian noise added to copied vectors
    double mean_interval = 1.0;     // mean of the exponential inter-event times
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// Stable user id for index i ("u00", "u01", ...).
    std::string user_name(std::size_t i) const;
};

/// Streams for every user of a planted network, ordered by user index.
/// Background events are Dirichlet-like mixtures concentrated on each
/// user's active topics. After each source event a target with a planted
/// edge arms a copy with probability p (and disarms otherwise); the target's
/// next event then emits the source vector plus noise.
std::vector<EventStream> planted_streams(const PlantedNetworkSpec& spec);

/// Spec with `n_edges` planted edges of probability p over distinct
/// ordered pairs, chosen deterministically from the seed.
PlantedNetworkSpec random_planted_spec(std::size_t n_users, std::size_t n_edges, double p,
                                       std::size_t events_per_user, std::uint64_t seed);

/// Two streams where Y repeats vector A then switches to B and X repeats C
/// then switches to D at nearly the same moment. A, B, C, D are orthogonal
/// unit vectors with small Gaussian jitter. Returns {X, Y}.
std::pair<EventStream, EventStream> switching_scenario(std::uint64_t seed,
                                                       std::size_t events_per_user = 200);

/// Randomly reassigns the vectors of a stream to its timestamps.
EventStream shuffle_timeline(const EventStream& stream, std::uint64_t seed);

} // namespace cte
