#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cte/graph.hpp"
#include "cte/synthgen.hpp"
#include "cte/textvec.hpp"
#include "cte/triples.hpp"

namespace cte::io {

/// Malformed input; `line()` is 1-based (0 when not line oriented).
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Fixed-point decimal text, e.g. fixed(0.5) == "0.500000000".
std::string fixed(double v, int precision = 9);

/// Seconds since the Unix epoch from a JSON number or an ISO 8601 string
/// ("2010-09-20T12:00:00Z", optional fraction and +hh:mm offset).
double parse_time(const nlohmann::json& value);

/// Raw JSONL: {"user": str, "time": number|ISO 8601, "text": str} per line.
std::vector<Document> read_documents(std::istream& in);

/// Vector JSONL: {"user": str, "time": ..., "vector": [numbers]} per line.
std::vector<Event> read_events(std::istream& in);
void write_events(std::ostream& out, std::span<const Event> events);

/// Header `source,target,te,mi,n_triples`.
void write_edges_csv(std::ostream& out, std::span<const EdgeScore> edges);
std::vector<EdgeScore> read_edges_csv(std::istream& in);

/// Header `bin_lo,bin_hi,count`.
void write_histogram_csv(std::ostream& out, const Histogram& h);

struct TruthEdge {
    std::string source;
    std::string target;
    double p = 0.0;
};

/// Header `source,target,p`.
void write_truth_csv(std::ostream& out, std::span<const TruthEdge> edges);
std::vector<TruthEdge> read_truth_csv(std::istream& in);
std::vector<TruthEdge> truth_edges(const PlantedNetworkSpec& spec);

nlohmann::json evaluation_json(const RankingEvaluation& ev);

/// Planted-network spec from JSON. Unknown or ill-typed fields raise
/// std::invalid_argument naming the field. Edges are
/// [{"source": i, "target": j, "p": x}, ...].
PlantedNetworkSpec planted_spec_from_json(const nlohmann::json& j);

} // namespace cte::io
