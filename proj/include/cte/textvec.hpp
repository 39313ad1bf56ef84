#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cte {

struct Document {
    std::string user;
    double time = 0.0;
    std::string text;
};

inline constexpr std::string_view kUrlToken = "[url]";
inline constexpr std::string_view kMentionToken = "[mention]";

/// Bundled English stop-word list, already in filtered (a-z only) form.
const std::vector<std::string>& stop_words();

/// Tokenizes one document, or returns nullopt when it is a retweet
/// (text starting with "RT @"). Steps, per whitespace token:
///   - tokens starting with http://, https:// or www. become "[url]"
///   - tokens starting with '@' become "[mention]"
///   - otherwise every character outside a-z/A-Z is removed, the rest
///     lowercased, and empty results or stop-words dropped.
/// "[url]" and "[mention]" pass through unchanged, so re-running on the
/// output is a no-op.
std::optional<std::vector<std::string>> preprocess(std::string_view text);

struct VocabEntry {
    std::size_t index = 0;
    std::size_t doc_freq = 0;
};

/// Terms kept for weighting: document frequency above 1 and below D.
struct Vocabulary {
    std::map<std::string, VocabEntry> terms;
    std::size_t n_documents = 0;

    std::size_t size() const noexcept { return terms.size(); }
};

/// Sparse vector: (term index, weight), ascending by index.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

struct TfidfResult {
    Vocabulary vocabulary;
    std::vector<SparseVector> vectors;
};

/// Weight of a term with frequency f in a document: f * log2(D / d).
TfidfResult tfidf(const std::vector<std::vector<std::string>>& corpus);

/// Linear stage of the projection: dense = R * sparse where column j of R
/// holds out_dim standard normals seeded by (seed, j).
std::vector<double> random_projection(const SparseVector& v, std::size_t out_dim,
                                      std::uint64_t seed);

/// random_projection followed by taking absolute values and L1
/// normalisation, so outputs look like topic distributions. A zero input
/// maps to a zero vector.
std::vector<double> project(const SparseVector& v, std::size_t out_dim, std::uint64_t seed);

struct ActiveTopicProfile {
    std::string user;
    std::vector<double> stddev; // population standard deviation per dimension
    std::size_t active_count = 0;
    double threshold = 0.05;
};

/// Dimensions whose standard deviation across a user's vectors exceeds
/// `threshold`. Needs at least two vectors of equal dimension.
ActiveTopicProfile active_topics(std::span<const std::vector<double>> vectors,
                                 double threshold = 0.05, std::string user = {});

} // namespace cte
