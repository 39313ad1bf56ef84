#include "cte/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>

#include "cte/rng.hpp"

namespace cte {

void GaussianSpec::validate() const
{
    const auto d = static_cast<std::size_t>(covariance.rows());
    if (covariance.cols() != covariance.rows()) {
        throw std::invalid_argument("GaussianSpec: covariance must be square");
    }
    if (dx == 0 || dy == 0 || dx + dy + dz != d) {
        throw std::invalid_argument("GaussianSpec: block sizes must be positive and sum to the dimension");
    }
    if (static_cast<std::size_t>(mean.size()) != d) {
        throw std::invalid_argument("GaussianSpec: mean has wrong dimension");
    }
    if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
        throw std::invalid_argument("GaussianSpec: covariance must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("GaussianSpec: covariance must be positive definite");
    }
}

GaussianSpec GaussianSpec::three_variable_example()
{
    GaussianSpec spec;
    spec.mean = Eigen::VectorXd::Zero(3);
    spec.covariance.resize(3, 3);
    spec.covariance << 4, 3, 1,
                       3, 4, 1,
                       1, 1, 2;
    spec.dx = 1;
    spec.dy = 1;
    spec.dz = 1;
    return spec;
}

JointSamples gaussian_samples(const GaussianSpec& spec, std::size_t n, std::uint64_t seed)
{
    spec.validate();
    if (n == 0) {
        throw std::invalid_argument("gaussian_samples: n must be at least 1");
    }
    const auto d = static_cast<Eigen::Index>(spec.covariance.rows());
    const Eigen::MatrixXd chol = spec.covariance.llt().matrixL();

    JointSamples out{PointSet(spec.dx), PointSet(spec.dy), std::nullopt};
    if (spec.dz > 0) {
        out.z = PointSet(spec.dz);
    }
    out.x.reserve(n);
    out.y.reserve(n);

    Eigen::VectorXd normals(d);
    std::vector<double> buf;
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64Engine rng(derive_seed(seed, i));
        std::normal_distribution<double> normal;
        for (Eigen::Index l = 0; l < d; ++l) {
            normals[l] = normal(rng);
        }
        const Eigen::VectorXd draw = spec.mean + chol * normals;
        buf.assign(draw.data(), draw.data() + d);
        const std::span<const double> row(buf);
        out.x.push_back(row.subspan(0, spec.dx));
        out.y.push_back(row.subspan(spec.dx, spec.dy));
        if (out.z) {
            out.z->push_back(row.subspan(spec.dx + spec.dy, spec.dz));
        }
    }
    return out;
}

namespace {

// Determinant of the principal submatrix over the given coordinates.
double sub_det(const Eigen::MatrixXd& cov, const std::vector<Eigen::Index>& idx)
{
    if (idx.empty()) {
        return 1.0;
    }
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = 0; b < idx.size(); ++b) {
            sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cov(idx[a], idx[b]);
        }
    }
    const double det = sub.determinant();
    if (!(det > 0.0)) {
        throw std::invalid_argument("analytic Gaussian information: singular sub-block");
    }
    return det;
}

std::vector<Eigen::Index> span_idx(std::size_t begin, std::size_t len)
{
    std::vector<Eigen::Index> v(len);
    std::iota(v.begin(), v.end(), static_cast<Eigen::Index>(begin));
    return v;
}

std::vector<Eigen::Index> concat(std::vector<Eigen::Index> a, const std::vector<Eigen::Index>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

double analytic_gaussian_cmi(const GaussianSpec& spec)
{
    spec.validate();
    const auto x = span_idx(0, spec.dx);
    const auto y = span_idx(spec.dx, spec.dy);
    const auto z = span_idx(spec.dx + spec.dy, spec.dz);
    const Eigen::MatrixXd& c = spec.covariance;
    return 0.5 * std::log(sub_det(c, concat(x, z)) * sub_det(c, concat(y, z)) /
                          (sub_det(c, z) * sub_det(c, concat(concat(x, y), z))));
}

double analytic_gaussian_mi(const GaussianSpec& spec)
{
    spec.validate();
    const auto x = span_idx(0, spec.dx);
    const auto y = span_idx(spec.dx, spec.dy);
    const Eigen::MatrixXd& c = spec.covariance;
    return 0.5 * std::log(sub_det(c, x) * sub_det(c, y) / sub_det(c, concat(x, y)));
}

namespace {

PointSet pad_block(const PointSet& block, std::size_t extra, double sigma, std::uint64_t seed,
                   std::uint64_t block_id)
{
    const std::size_t d = block.dim() + extra;
    PointSet out(d);
    out.reserve(block.size());
    std::vector<double> row(d);
    for (std::size_t i = 0; i < block.size(); ++i) {
        auto src = block[i];
        std::copy(src.begin(), src.end(), row.begin());
        SplitMix64Engine rng(derive_seed(seed, block_id, i));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t l = block.dim(); l < d; ++l) {
            row[l] = sigma == 0.0 ? 0.0 : sigma * normal(rng);
        }
        out.push_back(row);
    }
    return out;
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed, bool forbid_identity)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64Engine rng(seed);
    while (true) {
        std::shuffle(perm.begin(), perm.end(), rng);
        if (!forbid_identity || n < 2 || !std::is_sorted(perm.begin(), perm.end())) {
            return perm;
        }
    }
}

} // namespace

JointSamples pad_noise_dims(const JointSamples& samples, std::size_t extra_per_block, double sigma,
                            std::uint64_t seed)
{
    samples.validate();
    if (!(sigma >= 0.0)) {
        throw std::invalid_argument("pad_noise_dims: sigma must be nonnegative");
    }
    JointSamples out{pad_block(samples.x, extra_per_block, sigma, seed, 0),
                     pad_block(samples.y, extra_per_block, sigma, seed, 1), std::nullopt};
    if (samples.z) {
        out.z = pad_block(*samples.z, extra_per_block, sigma, seed, 2);
    }
    return out;
}

JointSamples permute_null(const JointSamples& samples, std::uint64_t seed)
{
    samples.validate();
    const std::size_t n = samples.size();
    JointSamples out = samples;
    out.y = samples.y.select(random_permutation(n, derive_seed(seed, 1), true));
    if (samples.z) {
        out.z = samples.z->select(random_permutation(n, derive_seed(seed, 2), true));
    }
    return out;
}

void PlantedNetworkSpec::validate() const
{
    if (n_users < 2) {
        throw std::invalid_argument("n_users: need at least 2 users");
    }
    if (topic_dim == 0) {
        throw std::invalid_argument("topic_dim: must be positive");
    }
    if (active_topics == 0 || active_topics > topic_dim) {
        throw std::invalid_argument("active_topics: must lie in [1, topic_dim]");
    }
    if (events_per_user < 2) {
        throw std::invalid_argument("events_per_user: need at least 2 events");
    }
    if (!(noise_scale >= 0.0)) {
        throw std::invalid_argument("noise_scale: must be nonnegative");
    }
    if (!(mean_interval > 0.0)) {
        throw std::invalid_argument("mean_interval: must be positive");
    }
    for (const PlantedEdge& e : edges) {
        if (e.source >= n_users || e.target >= n_users || e.source == e.target) {
            throw std::invalid_argument("edges: source/target must be distinct valid users");
        }
        if (!(e.p >= 0.0 && e.p <= 1.0)) {
            throw std::invalid_argument("edges: p must lie in [0, 1]");
        }
    }
}

std::string PlantedNetworkSpec::user_name(std::size_t i) const
{
    std::string digits = std::to_string(i);
    const std::size_t width = std::to_string(n_users > 0 ? n_users - 1 : 0).size();
    return "u" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

namespace {

std::vector<double> background_vector(const std::vector<double>& alpha, std::uint64_t seed)
{
    SplitMix64Engine rng(seed);
    std::vector<double> v(alpha.size());
    double total = 0.0;
    for (std::size_t d = 0; d < alpha.size(); ++d) {
        std::gamma_distribution<double> g(alpha[d], 1.0);
        v[d] = g(rng);
        total += v[d];
    }
    if (total > 0.0) {
        for (double& x : v) {
            x /= total;
        }
    }
    return v;
}

} // namespace

std::vector<EventStream> planted_streams(const PlantedNetworkSpec& spec)
{
    spec.validate();
    const std::size_t nu = spec.n_users;

    // Per-user Dirichlet concentration: high on a few active topics.
    std::vector<std::vector<double>> alpha(nu, std::vector<double>(spec.topic_dim, 0.05));
    for (std::size_t u = 0; u < nu; ++u) {
        std::vector<std::size_t> topics(spec.topic_dim);
        std::iota(topics.begin(), topics.end(), std::size_t{0});
        SplitMix64Engine rng(derive_seed(spec.seed, 1, u));
        std::shuffle(topics.begin(), topics.end(), rng);
        for (std::size_t a = 0; a < spec.active_topics; ++a) {
            alpha[u][topics[a]] = 1.0;
        }
    }

    struct Slot {
        double time;
        std::size_t user;
        std::size_t index;
    };
    std::vector<Slot> slots;
    slots.reserve(nu * spec.events_per_user);
    for (std::size_t u = 0; u < nu; ++u) {
        SplitMix64Engine rng(derive_seed(spec.seed, 2, u));
        std::exponential_distribution<double> gap(1.0 / spec.mean_interval);
        double t = 0.0;
        for (std::size_t e = 0; e < spec.events_per_user; ++e) {
            t += gap(rng);
            slots.push_back({t, u, e});
        }
    }
    std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        return a.time != b.time ? a.time < b.time : a.user < b.user;
    });

    std::vector<std::vector<const PlantedEdge*>> outgoing(nu);
    for (const PlantedEdge& e : spec.edges) {
        outgoing[e.source].push_back(&e);
    }

    std::vector<EventStream> streams(nu);
    for (std::size_t u = 0; u < nu; ++u) {
        streams[u].user = spec.user_name(u);
        streams[u].events.reserve(spec.events_per_user);
    }
    std::vector<std::optional<std::vector<double>>> pending(nu);

    for (const Slot& s : slots) {
        std::vector<double> v;
        if (pending[s.user]) {
            v = std::move(*pending[s.user]);
            pending[s.user].reset();
            SplitMix64Engine rng(derive_seed(spec.seed, 3, s.user, s.index));
            std::normal_distribution<double> normal(0.0, 1.0);
            for (double& x : v) {
                x += spec.noise_scale * normal(rng);
            }
        } else {
            v = background_vector(alpha[s.user], derive_seed(spec.seed, 4, s.user, s.index));
        }
        for (std::size_t k = 0; k < outgoing[s.user].size(); ++k) {
            const PlantedEdge& e = *outgoing[s.user][k];
            SplitMix64Engine rng(derive_seed(spec.seed, 5, s.user, s.index, k));
            if (rng.uniform() < e.p) {
                pending[e.target] = v;
            } else {
                pending[e.target].reset();
            }
        }
        streams[s.user].events.push_back({streams[s.user].user, s.time, std::move(v)});
    }
    return streams;
}

PlantedNetworkSpec random_planted_spec(std::size_t n_users, std::size_t n_edges, double p,
                                       std::size_t events_per_user, std::uint64_t seed)
{
    PlantedNetworkSpec spec;
    spec.n_users = n_users;
    spec.events_per_user = events_per_user;
    spec.seed = seed;
    if (n_users < 2 || n_edges > n_users * (n_users - 1)) {
        throw std::invalid_argument("random_planted_spec: too many edges for the user count");
    }
    std::set<std::pair<std::size_t, std::size_t>> used;
    SplitMix64Engine rng(derive_seed(seed, 6));
    std::uniform_int_distribution<std::size_t> pick(0, n_users - 1);
    while (spec.edges.size() < n_edges) {
        const std::size_t s = pick(rng);
        const std::size_t t = pick(rng);
        if (s == t || used.count({s, t}) || used.count({t, s})) {
            continue;
        }
        used.insert({s, t});
        spec.edges.push_back({s, t, p});
    }
    spec.validate();
    return spec;
}

std::pair<EventStream, EventStream> switching_scenario(std::uint64_t seed,
                                                       std::size_t events_per_user)
{
    if (events_per_user < 4) {
        throw std::invalid_argument("switching_scenario: need at least 4 events per user");
    }
    constexpr std::size_t dim = 4;
    constexpr double jitter_sd = 0.01;
    const auto unit = [](std::size_t d) {
        std::vector<double> v(dim, 0.0);
        v[d] = 1.0;
        return v;
    };
    const std::vector<double> a = unit(0), b = unit(1), c = unit(2), d = unit(3);

    const auto make = [&](const std::string& user, const std::vector<double>& before,
                          const std::vector<double>& after, double switch_time,
                          std::uint64_t stream_seed) {
        EventStream s;
        s.user = user;
        SplitMix64Engine rng(stream_seed);
        std::exponential_distribution<double> gap(1.0);
        std::normal_distribution<double> normal(0.0, jitter_sd);
        double t = 0.0;
        for (std::size_t e = 0; e < events_per_user; ++e) {
            t += gap(rng);
            std::vector<double> v = t < switch_time ? before : after;
            for (double& x : v) {
                x += normal(rng);
            }
            s.events.push_back({user, t, std::move(v)});
        }
        return s;
    };

    // Both users emit at unit rate; the switch lands mid-horizon for each.
    const double horizon = static_cast<double>(events_per_user);
    const double switch_y = 0.5 * horizon;
    const double switch_x = switch_y + 0.5;
    EventStream y = make("Y", a, b, switch_y, derive_seed(seed, 1));
    EventStream x = make("X", c, d, switch_x, derive_seed(seed, 2));
    return {std::move(x), std::move(y)};
}

EventStream shuffle_timeline(const EventStream& stream, std::uint64_t seed)
{
    EventStream out = stream;
    std::vector<std::size_t> perm = random_permutation(stream.size(), seed, false);
    for (std::size_t i = 0; i < stream.size(); ++i) {
        out.events[i].vector = stream.events[perm[i]].vector;
    }
    return out;
}

} // namespace cte
