// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cte/estimators.hpp"
#include "cte/graph.hpp"
#include "cte/knn.hpp"
#include "cte/rng.hpp"
#include "cte/synthgen.hpp"
#include "oracle.hpp"

using namespace cte;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::string num(double v, int precision = 5)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

double mean_of(const std::vector<double>& v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v)
{
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

const GaussianSpec& gauss() { static const GaussianSpec g = GaussianSpec::three_variable_example(); return g; }

JointSamples xy_only(const JointSamples& s) { return {s.x, s.y, std::nullopt}; }

// Seeded estimate on jittered data, full sample.
double cmi_estimate(const JointSamples& s, std::size_t k, std::uint64_t seed)
{
    EstimatorConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    return ksg_cmi(jitter(s, cfg), cfg);
}

double mi_estimate(const JointSamples& s, std::size_t k, std::uint64_t seed)
{
    EstimatorConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    return ksg_mi(jitter(s, cfg), cfg);
}

constexpr std::size_t kSeeds = 50;

struct GaussianRuns {
    std::vector<double> cmi_2000, mi_2000, cmi_400;
    double cmi_2000_seconds = 0.0;
};

GaussianRuns gaussian_runs(std::size_t k)
{
    GaussianRuns r;
    for (std::size_t s = 0; s < kSeeds; ++s) {
        const auto t0 = std::chrono::steady_clock::now();
        const JointSamples big = gaussian_samples(gauss(), 2000, derive_seed(1000, s));
        r.cmi_2000.push_back(cmi_estimate(big, k, derive_seed(2000, s)));
        r.cmi_2000_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.mi_2000.push_back(mi_estimate(xy_only(big), k, derive_seed(3000, s)));
        const JointSamples small = gaussian_samples(gauss(), 400, derive_seed(4000, s));
        r.cmi_400.push_back(cmi_estimate(small, k, derive_seed(5000, s)));
    }
    return r;
}

Outcome criterion_cmi(const GaussianRuns& r)
{
    const double seconds = r.cmi_2000_seconds;
    const double truth = analytic_gaussian_cmi(gauss());
    const double m = mean_of(r.cmi_2000);
    const double m400 = mean_of(r.cmi_400);
    const double se400 = stderr_of(r.cmi_400);
    const double lo = m400 - 1.96 * se400, hi = m400 + 1.96 * se400;
    const bool ok = std::abs(m - truth) <= 0.03 && lo <= truth && truth <= hi && seconds < 60.0;
    return {ok, "oracle " + num(truth) + ", mean@2000 " + num(m) + ", 95% CI@400 [" + num(lo) +
                    ", " + num(hi) + "], " + num(seconds, 1) + " s"};
}

Outcome criterion_mi(const GaussianRuns& r)
{
    const double truth = analytic_gaussian_mi(gauss());
    const double m = mean_of(r.mi_2000);
    return {std::abs(m - truth) <= 0.03, "oracle " + num(truth) + ", mean@2000 " + num(m)};
}

Outcome criterion_permutation()
{
    std::size_t within = 0;
    double worst = 0.0;
    for (std::size_t s = 0; s < kSeeds; ++s) {
        const JointSamples g = gaussian_samples(gauss(), 1000, derive_seed(6000, s));
        const double v = cmi_estimate(permute_null(g, derive_seed(6100, s)), 3, derive_seed(6200, s));
        within += std::abs(v) < 0.05 ? 1 : 0;
        worst = std::max(worst, std::abs(v));
    }
    const bool ok = within * 100 >= 95 * kSeeds;
    return {ok, std::to_string(within) + "/" + std::to_string(kSeeds) + " seeds with |est| < 0.05, max |est| " +
                    num(worst)};
}

Outcome criterion_padding()
{
    // 1 informative + 149 noise coordinates per block.
    constexpr std::size_t kRuns = 5;
    std::vector<double> small, large;
    for (std::size_t s = 0; s < kRuns; ++s) {
        const JointSamples g = gaussian_samples(gauss(), 400, derive_seed(7000, s));
        small.push_back(cmi_estimate(pad_noise_dims(g, 149, 0.05, derive_seed(7100, s)), 3,
                                     derive_seed(7200, s)));
        large.push_back(cmi_estimate(pad_noise_dims(g, 149, 5.0, derive_seed(7300, s)), 3,
                                     derive_seed(7400, s)));
    }
    const double ms = mean_of(small), ml = mean_of(large);
    const double lo = 0.357 - 0.10, hi = 0.357 + 0.05;
    const bool ok = ms >= lo && ms <= hi && ml < 0.1;
    return {ok, "sigma 0.05: " + num(ms) + " in [" + num(lo, 3) + ", " + num(hi, 3) + "], sigma 5: " +
                    num(ml) + " (mean of " + std::to_string(kRuns) + " seeds)"};
}

Outcome criterion_constant_padding()
{
    bool ok = true;
    for (std::size_t s = 0; s < 5; ++s) {
        EstimatorConfig cfg;
        cfg.seed = s;
        const JointSamples g = jitter(gaussian_samples(gauss(), 500, derive_seed(8000, s)), cfg);
        const double cmi = ksg_cmi(g, cfg);
        const double mi = ksg_mi(xy_only(g), cfg);
        // constant coordinates appended to one block at a time, then all
        for (int which = 0; which < 4; ++which) {
            JointSamples p = g;
            const auto pad = [](PointSet& ps, double c) {
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    rows.emplace_back(ps[i].begin(), ps[i].end());
                    rows.back().insert(rows.back().end(), {c, -c, 0.0});
                }
                ps = PointSet::from_rows(rows);
            };
            if (which == 0 || which == 3) pad(p.x, 7.5);
            if (which == 1 || which == 3) pad(p.y, -2.0);
            if (which == 2 || which == 3) pad(*p.z, 1e6);
            ok &= ksg_cmi(p, cfg) == cmi;
            ok &= ksg_mi(xy_only(p), cfg) == mi;
        }
    }
    return {ok, ok ? "bit-identical over 5 seeds x 4 paddings" : "estimate changed under constant padding"};
}

Outcome criterion_local_global()
{
    double worst = 0.0;
    for (std::size_t s = 0; s < 5; ++s) {
        EstimatorConfig cfg;
        cfg.seed = s;
        const JointSamples g = jitter(gaussian_samples(gauss(), 800, derive_seed(9000, s)), cfg);
        const auto locals = local_cmi_all(g, cfg);
        worst = std::max(worst, std::abs(mean_of(locals) - ksg_cmi(g, cfg)));
    }
    return {worst <= 1e-12, "max |mean(local) - global| " + sci(worst)};
}

Outcome criterion_auc()
{
    const double hm = hanley_mcneil_stderr(0.5, 74, 785);
    std::mt19937_64 rng(derive_seed(10000));
    std::normal_distribution<double> normal;
    std::vector<double> scores(74 + 785);
    for (double& v : scores) {
        v = normal(rng);
    }
    std::vector<bool> labels(scores.size(), false);
    std::fill(labels.begin(), labels.begin() + 74, true);
    std::vector<double> aucs;
    for (int t = 0; t < 200; ++t) {
        std::shuffle(labels.begin(), labels.end(), rng);
        aucs.push_back(auc(scores, labels).auc);
    }
    const double m = mean_of(aucs), se = stderr_of(aucs);
    const bool ok = std::abs(hm - 0.035) <= 0.002 && std::abs(m - 0.5) <= 2.0 * se;
    return {ok, "null stderr " + num(hm) + ", shuffled mean " + num(m) + " (stderr of mean " + num(se) + ")"};
}

Outcome criterion_planted()
{
    const auto t0 = std::chrono::steady_clock::now();
    const PlantedNetworkSpec spec = random_planted_spec(20, 5, 0.5, 300, 1);
    const auto edges = score_all_pairs(planted_streams(spec), EstimatorConfig{}, 100);
    std::set<EdgeId> truth;
    for (const auto& e : spec.edges) {
        truth.insert({spec.user_name(e.source), spec.user_name(e.target)});
    }
    std::vector<double> scores;
    std::vector<bool> labels;
    for (const auto& e : edges) {
        scores.push_back(e.transfer_entropy);
        labels.push_back(truth.count(e.id()) > 0);
    }
    const std::size_t n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    const double a = n_pos > 0 && n_pos < labels.size() ? auc(scores, labels).auc : 0.0;

    std::size_t asymmetric = 0;
    const auto te = [&](const std::string& s, const std::string& t) {
        for (const auto& e : edges) {
            if (e.source == s && e.target == t) {
                return e.transfer_entropy;
            }
        }
        return std::nan("");
    };
    for (const auto& id : truth) {
        asymmetric += te(id.source, id.target) > te(id.target, id.source) ? 1 : 0;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = n_pos == 5 && a > 0.9 && asymmetric == 5 && seconds < 300.0;
    return {ok, "AUC " + num(a, 3) + " over " + std::to_string(edges.size()) + " scored pairs (" +
                    std::to_string(n_pos) + " planted), asymmetric " + std::to_string(asymmetric) +
                    "/5, " + num(seconds, 1) + " s"};
}

Outcome criterion_switching()
{
    const auto [x, y] = switching_scenario(3);
    const TripleSet ts = build_triples(x, y);
    EstimatorConfig cfg;
    const double te = subsampled_estimate(ts.triples, cfg, Measure::conditional_mutual_information).value;
    const double mi = subsampled_estimate(xy_only(ts.triples), cfg, Measure::mutual_information).value;
    return {mi - te >= 0.2, "MI " + num(mi) + ", TE " + num(te) + ", difference " + num(mi - te)};
}

Outcome criterion_k_sensitivity(const std::array<GaussianRuns, 3>& runs)
{
    const std::array<std::size_t, 3> ks{3, 5, 10};
    bool ok = true;
    std::string detail;
    std::array<double, 3> cmi{}, mi{};
    for (std::size_t i = 0; i < 3; ++i) {
        const Outcome o1 = criterion_cmi(runs[i]);
        const Outcome o2 = criterion_mi(runs[i]);
        const bool c1 = o1.pass, c2 = o2.pass;
        ok &= c1 && c2;
        cmi[i] = mean_of(runs[i].cmi_2000);
        mi[i] = mean_of(runs[i].mi_2000);
        detail += "k=" + std::to_string(ks[i]) + ": cmi " + num(cmi[i]) + ", mi " + num(mi[i]) +
                  (c1 ? "" : " (criterion 1 fails: " + o1.detail + ")") +
                  (c2 ? "" : " (criterion 2 fails: " + o2.detail + ")") + "; ";
    }
    double spread = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a + 1; b < 3; ++b) {
            spread = std::max({spread, std::abs(cmi[a] - cmi[b]), std::abs(mi[a] - mi[b])});
        }
    }
    ok &= spread < 0.05;
    return {ok, detail + "max pairwise difference " + num(spread)};
}

Outcome criterion_brute_force()
{
    std::size_t mismatches = 0;
    double worst = 0.0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(derive_seed(11000, trial));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t n = 20;
        const std::size_t d = 2 + trial % 2; // one coordinate per block: x, y and (for 3) z
        std::vector<oracle::Row> rows(n, oracle::Row(d));
        for (auto& r : rows) {
            for (double& v : r) {
                v = u(rng);
            }
        }
        const PointSet ps = PointSet::from_rows(rows);
        std::vector<std::size_t> dims(d, 1);
        const BlockLayout layout = BlockLayout::from_dims(dims);
        const std::vector<Projection> proj = d == 2 ? std::vector<Projection>{0b01, 0b10}
                                                    : std::vector<Projection>{0b101, 0b110, 0b100};
        for (std::size_t k : {1, 3, 5}) {
            const NeighborCounts par = parallel::neighbor_counts(ps, layout, proj, k);
            const NeighborCounts ser = serial::neighbor_counts(ps, layout, proj, k);
            for (std::size_t i = 0; i < n; ++i) {
                const double r = oracle::kth_radius(rows, i, k);
                mismatches += kth_neighbor_radius(ps, i, k) != r;
                mismatches += par.radius[i] != r || ser.radius[i] != r;
                for (std::size_t p = 0; p < proj.size(); ++p) {
                    std::vector<oracle::Row> sub;
                    for (const auto& row : rows) {
                        oracle::Row s;
                        for (std::size_t b = 0; b < d; ++b) {
                            if (proj[p] & (1u << b)) {
                                s.push_back(row[b]);
                            }
                        }
                        sub.push_back(s);
                    }
                    const std::size_t c = oracle::strict_count(sub, i, r);
                    mismatches += par.count(i, p) != c || ser.count(i, p) != c;
                    mismatches += count_within(ps, layout.mask(proj[p]), i, r) != c;
                }
            }

            std::vector<oracle::Row> x, y, z;
            for (const auto& row : rows) {
                x.push_back({row[0]});
                y.push_back({row[1]});
                if (d == 3) {
                    z.push_back({row[2]});
                }
            }
            JointSamples js{PointSet::from_rows(x), PointSet::from_rows(y), std::nullopt};
            EstimatorConfig cfg;
            cfg.k = k;
            if (d == 3) {
                js.z = PointSet::from_rows(z);
                worst = std::max(worst, std::abs(ksg_cmi(js, cfg) - oracle::ksg_cmi(x, y, z, k)));
            } else {
                worst = std::max(worst, std::abs(ksg_mi(js, cfg) - oracle::ksg_mi(x, y, k)));
            }
        }
    }
    return {mismatches == 0 && worst <= 1e-12,
            std::to_string(mismatches) + " radius/count mismatches, max estimator difference " + sci(worst)};
}

} // namespace

int main()
{
    std::array<GaussianRuns, 3> runs;
    const std::array<std::size_t, 3> ks{3, 5, 10};
    for (std::size_t i = 0; i < 3; ++i) {
        runs[i] = gaussian_runs(ks[i]);
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gaussian-cmi-convergence", [&] { return criterion_cmi(runs[0]); }},
        {"gaussian-mi", [&] { return criterion_mi(runs[0]); }},
        {"permutation-null", criterion_permutation},
        {"high-dimensional-padding", criterion_padding},
        {"constant-padding-invariance", criterion_constant_padding},
        {"local-global-identity", criterion_local_global},
        {"auc-machinery", criterion_auc},
        {"planted-influence-recovery", criterion_planted},
        {"switching-scenario", criterion_switching},
        {"k-sensitivity", [&] { return criterion_k_sensitivity(runs); }},
        {"brute-force-oracle", criterion_brute_force},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
