#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cte/estimators.hpp"
#include "cte/triples.hpp"

namespace cte {

/// Directed edge source -> target. Ordered lexicographically by
/// (source, target); that order breaks ranking ties.
struct EdgeId {
    std::string source;
    std::string target;

    friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
    friend bool operator==(const EdgeId&, const EdgeId&) = default;
};

struct EdgeScore {
    std::string source;
    std::string target;
    double transfer_entropy = 0.0; // nats
    double time_delayed_mi = 0.0;  // nats
    std::size_t n_triples = 0;
    std::size_t n_zero_radius = 0;
    /// Filled only on request: (triple index, local transfer entropy),
    /// descending by value.
    std::vector<std::pair<std::size_t, double>> local_values;

    EdgeId id() const { return {source, target}; }
};

/// Seed for one ordered pair; independent of evaluation order and thread
/// count.
std::uint64_t pair_seed(std::uint64_t global_seed, const std::string& source,
                        const std::string& target);

/// Scores every ordered pair of distinct users. Pairs with fewer than
/// `min_triples` triples (or fewer than cfg.subsample_size) are omitted.
/// Pairs are distributed over OpenMP threads; the output is ordered by
/// (source index, target index) in `streams` and does not depend on the
/// number of threads.
std::vector<EdgeScore> score_all_pairs(std::span<const EventStream> streams,
                                       const EstimatorConfig& cfg, std::size_t min_triples,
                                       bool keep_locals = false);

/// Local transfer entropy of every triple, computed on the whole jittered
/// triple set with the pair's seed, sorted descending. Equal values keep
/// index order.
std::vector<std::pair<std::size_t, double>> local_ranking(const EdgeScore& edge,
                                                          const TripleSet& triples,
                                                          const EstimatorConfig& cfg);

struct RankingEvaluation {
    double auc = 0.5;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    double null_stderr = 0.0;
    std::size_t cutoff = 0;
    double precision_at_k = 0.0;
    double recall_at_k = 0.0;
};

/// Hanley-McNeil standard error of an AUC estimate.
double hanley_mcneil_stderr(double auc, std::size_t n_pos, std::size_t n_neg);

/// Mann-Whitney AUC (ties count one half), Hanley-McNeil stderr under the
/// random-ranking null (AUC = 0.5), and precision/recall among the top
/// `cutoff` scores. Throws std::invalid_argument without both classes.
RankingEvaluation auc(std::span<const double> scores, const std::vector<bool>& labels,
                      std::size_t cutoff = 100);

using Ranking = std::vector<EdgeId>; // best first

/// Edges sorted by descending score; ties by EdgeId.
Ranking rank_edges(std::span<const EdgeScore> scores, bool by_transfer_entropy = true);

struct FusedRank {
    EdgeId edge;
    double mean_rank = 0.0; // 0-based
};

/// Orders edges by their mean position across rankings; ties by EdgeId.
/// Throws std::invalid_argument if the rankings cover different edges.
std::vector<FusedRank> average_rank_fusion(std::span<const Ranking> rankings);

struct Histogram {
    std::vector<double> edges; // bins + 1 boundaries
    std::vector<std::size_t> counts;
};

/// Equal-width histogram of transfer entropy over [min, max]; the last bin
/// is closed. An empty input gives zero counts over [0, 1].
Histogram export_histogram(std::span<const EdgeScore> scores, std::size_t bins);

} // namespace cte
