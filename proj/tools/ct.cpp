// ct: content transfer command-line tool.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "cte/estimators.hpp"
#include "cte/graph.hpp"
#include "cte/io.hpp"
#include "cte/rng.hpp"
#include "cte/synthgen.hpp"
#include "cte/textvec.hpp"
#include "cte/triples.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    std::size_t k = 3;
    std::size_t nc = 100;
    double jitter = 1e-10;
    std::uint64_t seed = 0;
    std::size_t min_triples = 100;
    std::size_t dim = 10;
    std::size_t bins = 20;
    std::size_t cutoff = 100;
    int threads = 0;

    cte::EstimatorConfig estimator() const
    {
        cte::EstimatorConfig cfg;
        cfg.k = k;
        cfg.subsample_size = nc;
        cfg.jitter_intensity = jitter;
        cfg.seed = seed;
        cfg.validate();
        return cfg;
    }
};

// Input/output failures and bad arguments map to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "' for reading");
    }
    return in;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    return out;
}

void add_estimator_flags(CLI::App* cmd, RunConfig& rc)
{
    cmd->add_option("--k", rc.k, "nearest neighbours")->envname("CT_K")->check(CLI::PositiveNumber);
    cmd->add_option("--nc", rc.nc, "subsample size")->envname("CT_NC")->check(CLI::PositiveNumber);
    cmd->add_option("--jitter", rc.jitter, "jitter intensity")
        ->envname("CT_JITTER")
        ->check(CLI::NonNegativeNumber);
}

void add_seed_flag(CLI::App* cmd, RunConfig& rc)
{
    cmd->add_option("--seed", rc.seed, "random seed")->envname("CT_SEED");
}

void add_threads_flag(CLI::App* cmd, RunConfig& rc)
{
    cmd->add_option("--threads", rc.threads, "OpenMP threads (0 = runtime default)")
        ->envname("CT_THREADS")
        ->check(CLI::NonNegativeNumber);
}

// CLI11 skips environment values that fail validation; report them instead.
void check_env(const CLI::App* cmd)
{
    for (const CLI::Option* opt : cmd->get_options()) {
        const std::string name = opt->get_envname();
        if (name.empty() || opt->count() > 0) {
            continue;
        }
        const char* value = std::getenv(name.c_str());
        if (value != nullptr && *value != '\0') {
            throw UsageError(name + ": invalid value '" + std::string(value) + "'");
        }
    }
}

// vectorize -------------------------------------------------------------

int cmd_vectorize(const std::string& in_path, const std::string& out_path, const RunConfig& rc)
{
    auto in = open_in(in_path);
    const auto docs = cte::io::read_documents(in);

    std::vector<const cte::Document*> kept;
    std::vector<std::vector<std::string>> corpus;
    for (const auto& d : docs) {
        if (auto tokens = cte::preprocess(d.text)) {
            kept.push_back(&d);
            corpus.push_back(std::move(*tokens));
        }
    }
    const cte::TfidfResult tf = cte::tfidf(corpus);

    std::vector<cte::Event> events;
    events.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        events.push_back({kept[i]->user, kept[i]->time, cte::project(tf.vectors[i], rc.dim, rc.seed)});
    }
    auto out = open_out(out_path);
    cte::io::write_events(out, events);
    std::cout << "documents: " << corpus.size() << " (dropped " << docs.size() - corpus.size()
              << ")\nvocabulary: " << tf.vocabulary.size() << "\n";
    return kExitOk;
}

// pairs -----------------------------------------------------------------

int cmd_pairs(const std::string& in_path, const std::string& out_path, std::string hist_path,
              const RunConfig& rc)
{
    auto in = open_in(in_path);
    const auto streams = cte::group_streams(cte::io::read_events(in));
    if (streams.size() < 2) {
        throw UsageError("need events from at least 2 users, got " + std::to_string(streams.size()));
    }
    const auto edges = cte::score_all_pairs(streams, rc.estimator(), rc.min_triples);

    auto out = open_out(out_path);
    cte::io::write_edges_csv(out, edges);
    if (hist_path.empty()) {
        hist_path = out_path + ".hist.csv";
    }
    auto hist = open_out(hist_path);
    cte::io::write_histogram_csv(hist, cte::export_histogram(edges, rc.bins));

    std::cout << "users: " << streams.size() << "\nscored pairs: " << edges.size() << " of "
              << streams.size() * (streams.size() - 1) << "\n";
    return kExitOk;
}

// validate --------------------------------------------------------------

struct CurvePoint {
    std::size_t n = 0;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

CurvePoint summarize(std::size_t n, const std::vector<double>& v)
{
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    const double se = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) /
                                         std::sqrt(static_cast<double>(v.size()))
                                   : 0.0;
    return {n, m, m - 1.96 * se, m + 1.96 * se};
}

int cmd_validate(const std::string& out_path, std::size_t trials, const RunConfig& rc)
{
    if (trials < 2) {
        throw UsageError("--trials must be at least 2");
    }
    const cte::GaussianSpec spec = cte::GaussianSpec::three_variable_example();
    const double truth = cte::analytic_gaussian_cmi(spec);
    cte::EstimatorConfig base = rc.estimator();

    const auto estimate = [&](const cte::JointSamples& s, std::uint64_t seed) {
        cte::EstimatorConfig cfg = base;
        cfg.seed = seed;
        return cte::ksg_cmi(cte::jitter(s, cfg), cfg);
    };

    std::map<std::string, std::vector<CurvePoint>> curves;
    const std::vector<std::size_t> sizes{100, 200, 400, 800, 1600};
    const std::vector<std::size_t> padded_sizes{100, 200, 400};
    for (std::size_t n : sizes) {
        std::vector<double> cmi, perm;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t s = cte::derive_seed(rc.seed, n, t);
            const auto g = cte::gaussian_samples(spec, n, s);
            cmi.push_back(estimate(g, cte::derive_seed(s, 1)));
            perm.push_back(estimate(cte::permute_null(g, cte::derive_seed(s, 2)), cte::derive_seed(s, 3)));
        }
        curves["cmi"].push_back(summarize(n, cmi));
        curves["permuted"].push_back(summarize(n, perm));
    }
    for (std::size_t n : padded_sizes) {
        std::vector<double> pad;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t s = cte::derive_seed(rc.seed, n, t);
            const auto g = cte::gaussian_samples(spec, n, s);
            pad.push_back(estimate(cte::pad_noise_dims(g, 149, 0.05, cte::derive_seed(s, 4)),
                                   cte::derive_seed(s, 5)));
        }
        curves["padded150"].push_back(summarize(n, pad));
    }

    auto out = open_out(out_path);
    out << "curve,N,mean,ci_lo,ci_hi\n";
    for (const char* name : {"cmi", "permuted", "padded150"}) {
        for (const CurvePoint& p : curves[name]) {
            out << name << ',' << p.n << ',' << cte::io::fixed(p.mean) << ','
                << cte::io::fixed(p.ci_lo) << ',' << cte::io::fixed(p.ci_hi) << '\n';
        }
    }

    struct Check {
        std::string name;
        double value;
        double lo;
        double hi;
    };
    const std::vector<Check> checks{
        {"cmi_convergence", curves["cmi"].back().mean, truth - 0.03, truth + 0.03},
        {"permutation_null", curves["permuted"].back().mean, -0.05, 0.05},
        {"padded_150", curves["padded150"].back().mean, truth - 0.10, truth + 0.05},
    };
    int status = kExitOk;
    std::cout << "analytic cmi: " << cte::io::fixed(truth, 6) << "\n";
    for (const Check& c : checks) {
        const bool ok = c.value >= c.lo && c.value <= c.hi;
        std::cout << (ok ? "PASS " : "FAIL ") << c.name << ": " << cte::io::fixed(c.value, 6)
                  << " (allowed " << cte::io::fixed(c.lo, 6) << " .. " << cte::io::fixed(c.hi, 6)
                  << ")\n";
        if (!ok) {
            status = kExitValidation;
        }
    }
    return status;
}

// synth -----------------------------------------------------------------

struct SynthFlags {
    std::string spec_path;
    std::size_t users = 20;
    std::size_t edges = 5;
    double p = 0.5;
    std::size_t events = 300;
    double noise = 0.02;
};

int cmd_synth(const SynthFlags& f, const std::string& out_path, const std::string& truth_path,
              const RunConfig& rc)
{
    cte::PlantedNetworkSpec spec;
    if (!f.spec_path.empty()) {
        auto in = open_in(f.spec_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("spec file: " + std::string(e.what()));
        }
        spec = cte::io::planted_spec_from_json(j);
    } else {
        spec = cte::random_planted_spec(f.users, f.edges, f.p, f.events, rc.seed);
        spec.noise_scale = f.noise;
        spec.validate();
    }

    std::vector<cte::Event> events;
    for (const auto& s : cte::planted_streams(spec)) {
        events.insert(events.end(), s.events.begin(), s.events.end());
    }
    auto out = open_out(out_path);
    cte::io::write_events(out, events);
    auto truth = open_out(truth_path);
    cte::io::write_truth_csv(truth, cte::io::truth_edges(spec));
    std::cout << "users: " << spec.n_users << "\nevents: " << events.size()
              << "\nplanted edges: " << spec.edges.size() << "\n";
    return kExitOk;
}

// eval ------------------------------------------------------------------

int cmd_eval(const std::string& edges_path, const std::string& truth_path,
             const std::string& out_path, const std::string& score, const RunConfig& rc)
{
    auto ein = open_in(edges_path);
    const auto edges = cte::io::read_edges_csv(ein);
    auto tin = open_in(truth_path);
    std::set<cte::EdgeId> positives;
    for (const auto& t : cte::io::read_truth_csv(tin)) {
        positives.insert({t.source, t.target});
    }

    std::vector<double> scores;
    std::vector<bool> labels;
    for (const auto& e : edges) {
        scores.push_back(score == "mi" ? e.time_delayed_mi : e.transfer_entropy);
        labels.push_back(positives.count(e.id()) > 0);
    }
    const std::size_t n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    if (n_pos == 0) {
        throw UsageError("no ground-truth edge among the " + std::to_string(edges.size()) +
                         " scored edges");
    }
    if (n_pos == labels.size()) {
        throw UsageError("every scored edge is a ground-truth edge; AUC is undefined");
    }
    const cte::RankingEvaluation ev = cte::auc(scores, labels, rc.cutoff);
    nlohmann::json j = cte::io::evaluation_json(ev);
    j["score"] = score;
    j["n_truth"] = positives.size();

    const std::string text = j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        auto out = open_out(out_path);
        out << text;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ct: content transfer between event streams"};
    app.require_subcommand(1);
    RunConfig rc;

    std::string in_path, out_path, hist_path, truth_path, edges_path, score = "te";
    std::size_t trials = 20;
    SynthFlags synth;

    auto* vec = app.add_subcommand("vectorize", "raw text JSONL -> vector JSONL");
    vec->add_option("input", in_path, "raw JSONL")->required();
    vec->add_option("-o,--output", out_path, "vector JSONL")->required();
    vec->add_option("--dim", rc.dim, "projection dimension")->envname("CT_DIM")->check(CLI::PositiveNumber);
    add_seed_flag(vec, rc);

    auto* pairs = app.add_subcommand("pairs", "score every ordered pair of users");
    pairs->add_option("input", in_path, "vector JSONL")->required();
    pairs->add_option("-o,--output", out_path, "edge CSV")->required();
    pairs->add_option("--hist", hist_path, "histogram CSV (default: <output>.hist.csv)");
    pairs->add_option("--min-triples", rc.min_triples, "minimum triples per pair")
        ->envname("CT_MIN_TRIPLES");
    pairs->add_option("--bins", rc.bins, "histogram bins")->envname("CT_BINS")->check(CLI::PositiveNumber);
    add_estimator_flags(pairs, rc);
    add_seed_flag(pairs, rc);
    add_threads_flag(pairs, rc);

    auto* val = app.add_subcommand("validate", "Gaussian convergence, padding and null suites");
    val->add_option("-o,--output", out_path, "curves CSV")->required();
    val->add_option("--trials", trials, "repetitions per sample size")->envname("CT_TRIALS");
    add_estimator_flags(val, rc);
    add_seed_flag(val, rc);
    add_threads_flag(val, rc);

    auto* syn = app.add_subcommand("synth", "planted-influence network");
    syn->add_option("--spec", synth.spec_path, "spec JSON (overrides the flags below)");
    syn->add_option("--users", synth.users, "number of users");
    syn->add_option("--edges", synth.edges, "number of planted edges");
    syn->add_option("--p", synth.p, "copy probability");
    syn->add_option("--events", synth.events, "events per user");
    syn->add_option("--noise", synth.noise, "copy noise std");
    syn->add_option("-o,--output", out_path, "vector JSONL")->required();
    syn->add_option("--truth", truth_path, "truth CSV")->required();
    add_seed_flag(syn, rc);

    auto* ev = app.add_subcommand("eval", "AUC of an edge CSV against a truth CSV");
    ev->add_option("edges", edges_path, "edge CSV")->required();
    ev->add_option("truth", truth_path, "truth CSV")->required();
    ev->add_option("-o,--output", out_path, "evaluation JSON (default: stdout)");
    ev->add_option("--cutoff", rc.cutoff, "precision/recall cutoff")->envname("CT_CUTOFF")->check(CLI::PositiveNumber);
    ev->add_option("--score", score, "column to rank by")->check(CLI::IsMember({"te", "mi"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (const CLI::App* sub : app.get_subcommands()) {
            check_env(sub);
        }
        if (rc.threads > 0) {
            omp_set_num_threads(rc.threads);
        }
        if (*vec) {
            return cmd_vectorize(in_path, out_path, rc);
        }
        if (*pairs) {
            return cmd_pairs(in_path, out_path, hist_path, rc);
        }
        if (*val) {
            return cmd_validate(out_path, trials, rc);
        }
        if (*syn) {
            return cmd_synth(synth, out_path, truth_path, rc);
        }
        return cmd_eval(edges_path, truth_path, out_path, score, rc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitUsage;
}
