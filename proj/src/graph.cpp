#include "cte/graph.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "cte/rng.hpp"

namespace cte {

std::uint64_t pair_seed(std::uint64_t global_seed, const std::string& source,
                        const std::string& target)
{
    return derive_seed(global_seed, hash_string(source), hash_string(target));
}

std::vector<EdgeScore> score_all_pairs(std::span<const EventStream> streams,
                                       const EstimatorConfig& cfg, std::size_t min_triples,
                                       bool keep_locals)
{
    cfg.validate();
    const std::size_t nu = streams.size();
    std::vector<std::pair<std::size_t, std::size_t>> work;
    for (std::size_t s = 0; s < nu; ++s) {
        for (std::size_t t = 0; t < nu; ++t) {
            if (s != t) {
                work.emplace_back(s, t);
            }
        }
    }
    const std::size_t threshold = std::max(min_triples, cfg.subsample_size);

    std::vector<std::optional<EdgeScore>> slots(work.size());
    std::vector<std::exception_ptr> errors(work.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(work.size()); ++w) {
        try {
            const EventStream& source = streams[work[w].first];
            const EventStream& target = streams[work[w].second];
            const TripleSet triples = build_triples(target, source);
            if (triples.count() < threshold) {
                continue;
            }
            EstimatorConfig pair_cfg = cfg;
            pair_cfg.seed = pair_seed(cfg.seed, source.user, target.user);

            const EstimateResult te = subsampled_estimate(
                triples.triples, pair_cfg, Measure::conditional_mutual_information);
            const JointSamples unconditioned{triples.triples.x, triples.triples.y, std::nullopt};
            const EstimateResult mi =
                subsampled_estimate(unconditioned, pair_cfg, Measure::mutual_information);

            EdgeScore e;
            e.source = source.user;
            e.target = target.user;
            e.transfer_entropy = te.value;
            e.time_delayed_mi = mi.value;
            e.n_triples = triples.count();
            e.n_zero_radius = te.n_zero_radius;
            if (keep_locals) {
                e.local_values = local_ranking(e, triples, cfg);
            }
            slots[w] = std::move(e);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    }

    for (const auto& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
    std::vector<EdgeScore> out;
    for (auto& s : slots) {
        if (s) {
            out.push_back(std::move(*s));
        }
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> local_ranking(const EdgeScore& edge,
                                                          const TripleSet& triples,
                                                          const EstimatorConfig& cfg)
{
    EstimatorConfig pair_cfg = cfg;
    pair_cfg.seed = pair_seed(cfg.seed, edge.source, edge.target);
    const std::vector<double> locals = local_cmi_all(jitter(triples.triples, pair_cfg), pair_cfg);

    std::vector<std::pair<std::size_t, double>> out(locals.size());
    for (std::size_t i = 0; i < locals.size(); ++i) {
        out[i] = {i, locals[i]};
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

double hanley_mcneil_stderr(double a, std::size_t n_pos, std::size_t n_neg)
{
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("hanley_mcneil_stderr: need positives and negatives");
    }
    const double q1 = a / (2.0 - a);
    const double q2 = 2.0 * a * a / (1.0 + a);
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    const double var =
        (a * (1.0 - a) + (np - 1.0) * (q1 - a * a) + (nn - 1.0) * (q2 - a * a)) / (np * nn);
    return std::sqrt(var);
}

RankingEvaluation auc(std::span<const double> scores, const std::vector<bool>& labels,
                      std::size_t cutoff)
{
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("auc: scores and labels differ in length");
    }
    const std::size_t n = scores.size();
    RankingEvaluation ev;
    ev.n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    ev.n_neg = n - ev.n_pos;
    if (ev.n_pos == 0 || ev.n_neg == 0) {
        throw std::invalid_argument("auc: need at least one positive and one negative label");
    }

    // Mann-Whitney U from midranks.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double pos_rank_sum = 0.0;
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n && scores[order[hi]] == scores[order[lo]]) {
            ++hi;
        }
        const double midrank = 0.5 * static_cast<double>(lo + 1 + hi);
        for (std::size_t r = lo; r < hi; ++r) {
            if (labels[order[r]]) {
                pos_rank_sum += midrank;
            }
        }
        lo = hi;
    }
    const double np = static_cast<double>(ev.n_pos);
    const double nn = static_cast<double>(ev.n_neg);
    ev.auc = (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
    ev.null_stderr = hanley_mcneil_stderr(0.5, ev.n_pos, ev.n_neg);

    ev.cutoff = std::min(cutoff, n);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::size_t hits = 0;
    for (std::size_t r = 0; r < ev.cutoff; ++r) {
        hits += labels[order[r]] ? 1 : 0;
    }
    ev.precision_at_k = ev.cutoff == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(ev.cutoff);
    ev.recall_at_k = static_cast<double>(hits) / np;
    return ev;
}

Ranking rank_edges(std::span<const EdgeScore> scores, bool by_transfer_entropy)
{
    std::vector<const EdgeScore*> sorted;
    for (const auto& s : scores) {
        sorted.push_back(&s);
    }
    const auto value = [by_transfer_entropy](const EdgeScore* e) {
        return by_transfer_entropy ? e->transfer_entropy : e->time_delayed_mi;
    };
    std::sort(sorted.begin(), sorted.end(), [&](const EdgeScore* a, const EdgeScore* b) {
        if (value(a) != value(b)) {
            return value(a) > value(b);
        }
        return a->id() < b->id();
    });
    Ranking r;
    for (const EdgeScore* e : sorted) {
        r.push_back(e->id());
    }
    return r;
}

std::vector<FusedRank> average_rank_fusion(std::span<const Ranking> rankings)
{
    if (rankings.empty()) {
        return {};
    }
    std::map<EdgeId, double> total;
    for (std::size_t pos = 0; pos < rankings.front().size(); ++pos) {
        if (!total.emplace(rankings.front()[pos], static_cast<double>(pos)).second) {
            throw std::invalid_argument("average_rank_fusion: duplicate edge in ranking");
        }
    }
    for (std::size_t r = 1; r < rankings.size(); ++r) {
        if (rankings[r].size() != total.size()) {
            throw std::invalid_argument("average_rank_fusion: rankings cover different edges");
        }
        std::map<EdgeId, bool> seen;
        for (std::size_t pos = 0; pos < rankings[r].size(); ++pos) {
            auto it = total.find(rankings[r][pos]);
            if (it == total.end() || !seen.emplace(rankings[r][pos], true).second) {
                throw std::invalid_argument("average_rank_fusion: rankings cover different edges");
            }
            it->second += static_cast<double>(pos);
        }
    }
    std::vector<FusedRank> out;
    out.reserve(total.size());
    for (const auto& [edge, sum] : total) {
        out.push_back({edge, sum / static_cast<double>(rankings.size())});
    }
    // `total` is already ordered by EdgeId, so a stable sort keeps that order for ties.
    std::stable_sort(out.begin(), out.end(),
                     [](const FusedRank& a, const FusedRank& b) { return a.mean_rank < b.mean_rank; });
    return out;
}

Histogram export_histogram(std::span<const EdgeScore> scores, std::size_t bins)
{
    if (bins == 0) {
        throw std::invalid_argument("export_histogram: bins must be at least 1");
    }
    double lo = 0.0;
    double hi = 1.0;
    if (!scores.empty()) {
        const auto [mn, mx] = std::minmax_element(
            scores.begin(), scores.end(), [](const EdgeScore& a, const EdgeScore& b) {
                return a.transfer_entropy < b.transfer_entropy;
            });
        lo = mn->transfer_entropy;
        hi = mx->transfer_entropy;
        if (hi == lo) {
            hi = lo + 1.0;
        }
    }
    Histogram h;
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges.push_back(b == bins ? hi : lo + width * static_cast<double>(b));
    }
    for (const EdgeScore& s : scores) {
        auto b = static_cast<std::size_t>((s.transfer_entropy - lo) / width);
        h.counts[std::min(b, bins - 1)]++;
    }
    return h;
}

} // namespace cte
