#include "cte/textvec.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "cte/rng.hpp"

namespace cte {

const std::vector<std::string>& stop_words()
{
    // v1. Changing this list changes every downstream vector.
    static const std::vector<std::string> words = {
        "a",       "about",   "above",   "after",   "again",   "against", "all",     "am",
        "an",      "and",     "any",     "are",     "arent",   "as",      "at",      "be",
        "because", "been",    "before",  "being",   "below",   "between", "both",    "but",
        "by",      "can",     "cant",    "cannot",  "could",   "couldnt", "did",     "didnt",
        "do",      "does",    "doesnt",  "doing",   "dont",    "down",    "during",  "each",
        "few",     "for",     "from",    "further", "had",     "hadnt",   "has",     "hasnt",
        "have",    "havent",  "having",  "he",      "hed",     "hell",    "hes",     "her",
        "here",    "heres",   "hers",    "herself", "him",     "himself", "his",     "how",
        "hows",    "i",       "id",      "ill",     "im",      "ive",     "if",      "in",
        "into",    "is",      "isnt",    "it",      "its",     "itself",  "just",    "lets",
        "me",      "more",    "most",    "mustnt",  "my",      "myself",  "no",      "nor",
        "not",     "now",     "of",      "off",     "on",      "once",    "only",    "or",
        "other",   "ought",   "our",     "ours",    "ourselves", "out",   "over",    "own",
        "same",    "shant",   "she",     "shed",    "shell",   "shes",    "should",  "shouldnt",
        "so",      "some",    "such",    "than",    "that",    "thats",   "the",     "their",
        "theirs",  "them",    "themselves", "then", "there",   "theres",  "these",   "they",
        "theyd",   "theyll",  "theyre",  "theyve",  "this",    "those",   "through", "to",
        "too",     "under",   "until",   "up",      "very",    "was",     "wasnt",   "we",
        "wed",     "well",    "were",    "weve",    "werent",  "what",    "whats",   "when",
        "whens",   "where",   "wheres",  "which",   "while",   "who",     "whos",    "whom",
        "why",     "whys",    "will",    "with",    "wont",    "would",   "wouldnt", "you",
        "youd",    "youll",   "youre",   "youve",   "your",    "yours",   "yourself", "yourselves",
    };
    return words;
}

namespace {

bool starts_with(std::string_view s, std::string_view prefix)
{
    return s.substr(0, prefix.size()) == prefix;
}

bool is_url(std::string_view token)
{
    std::string lower(token.substr(0, 8));
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return starts_with(lower, "http://") || starts_with(lower, "https://") ||
           starts_with(lower, "www.");
}

const std::unordered_set<std::string>& stop_set()
{
    static const std::unordered_set<std::string> set(stop_words().begin(), stop_words().end());
    return set;
}

} // namespace

std::optional<std::vector<std::string>> preprocess(std::string_view text)
{
    if (starts_with(text, "RT @")) {
        return std::nullopt;
    }
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (in >> raw) {
        if (raw == kUrlToken || raw == kMentionToken) {
            tokens.push_back(raw);
        } else if (is_url(raw)) {
            tokens.emplace_back(kUrlToken);
        } else if (raw.front() == '@') {
            tokens.emplace_back(kMentionToken);
        } else {
            std::string word;
            for (unsigned char c : raw) {
                if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
                    word.push_back(static_cast<char>(std::tolower(c)));
                }
            }
            if (!word.empty() && !stop_set().count(word)) {
                tokens.push_back(std::move(word));
            }
        }
    }
    return tokens;
}

TfidfResult tfidf(const std::vector<std::vector<std::string>>& corpus)
{
    TfidfResult out;
    const std::size_t big_d = corpus.size();
    out.vocabulary.n_documents = big_d;

    std::map<std::string, std::size_t> df;
    for (const auto& doc : corpus) {
        for (const auto& term : std::set<std::string>(doc.begin(), doc.end())) {
            ++df[term];
        }
    }
    std::size_t next = 0;
    for (const auto& [term, d] : df) {
        if (d > 1 && d < big_d) {
            out.vocabulary.terms.emplace(term, VocabEntry{next++, d});
        }
    }

    out.vectors.reserve(big_d);
    for (const auto& doc : corpus) {
        std::map<std::size_t, double> freq;
        for (const auto& term : doc) {
            auto it = out.vocabulary.terms.find(term);
            if (it != out.vocabulary.terms.end()) {
                freq[it->second.index] += 1.0;
            }
        }
        out.vectors.emplace_back(freq.begin(), freq.end());
    }
    std::vector<double> idf(out.vocabulary.size());
    for (const auto& [term, entry] : out.vocabulary.terms) {
        idf[entry.index] =
            std::log2(static_cast<double>(big_d) / static_cast<double>(entry.doc_freq));
    }
    for (auto& v : out.vectors) {
        for (auto& [index, w] : v) {
            w *= idf[index];
        }
    }
    return out;
}

std::vector<double> random_projection(const SparseVector& v, std::size_t out_dim,
                                      std::uint64_t seed)
{
    if (out_dim == 0) {
        throw std::invalid_argument("random_projection: out_dim must be positive");
    }
    std::vector<double> out(out_dim, 0.0);
    for (const auto& [index, w] : v) {
        if (w == 0.0) {
            continue;
        }
        SplitMix64Engine rng(derive_seed(seed, index));
        std::normal_distribution<double> normal;
        for (double& o : out) {
            o += w * normal(rng);
        }
    }
    return out;
}

std::vector<double> project(const SparseVector& v, std::size_t out_dim, std::uint64_t seed)
{
    std::vector<double> out = random_projection(v, out_dim, seed);
    double total = 0.0;
    for (double& o : out) {
        o = std::abs(o);
        total += o;
    }
    if (total > 0.0) {
        for (double& o : out) {
            o /= total;
        }
    }
    return out;
}

ActiveTopicProfile active_topics(std::span<const std::vector<double>> vectors, double threshold,
                                 std::string user)
{
    if (vectors.size() < 2) {
        throw std::invalid_argument("active_topics: need at least two vectors");
    }
    const std::size_t d = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != d) {
            throw std::invalid_argument("active_topics: vectors differ in dimension");
        }
    }
    ActiveTopicProfile profile;
    profile.user = std::move(user);
    profile.threshold = threshold;
    profile.stddev.assign(d, 0.0);
    const auto n = static_cast<double>(vectors.size());
    for (std::size_t l = 0; l < d; ++l) {
        double mean = 0.0;
        for (const auto& v : vectors) {
            mean += v[l];
        }
        mean /= n;
        double ss = 0.0;
        for (const auto& v : vectors) {
            ss += (v[l] - mean) * (v[l] - mean);
        }
        profile.stddev[l] = std::sqrt(ss / n);
        profile.active_count += profile.stddev[l] > threshold ? 1 : 0;
    }
    return profile;
}

} // namespace cte
