#include "cte/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <regex>
#include <set>

namespace cte::io {

using nlohmann::json;

FormatError::FormatError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line)
{
}

std::string fixed(double v, int precision)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    std::string s(buf, res.ptr);
    if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

double parse_time(const json& value)
{
    if (value.is_number()) {
        const double t = value.get<double>();
        if (!std::isfinite(t)) {
            throw std::invalid_argument("time is not finite");
        }
        return t;
    }
    if (!value.is_string()) {
        throw std::invalid_argument("time must be a number or an ISO 8601 string");
    }
    static const std::regex iso(
        R"(^(\d{4})-(\d{2})-(\d{2})[T ](\d{2}):(\d{2}):(\d{2})(\.\d+)?(Z|[+-]\d{2}:?\d{2})?$)");
    const std::string s = value.get<std::string>();
    std::smatch m;
    if (!std::regex_match(s, m, iso)) {
        throw std::invalid_argument("unparseable ISO 8601 time '" + s + "'");
    }
    using namespace std::chrono;
    const year_month_day ymd{year{std::stoi(m[1])}, month{static_cast<unsigned>(std::stoi(m[2]))},
                             day{static_cast<unsigned>(std::stoi(m[3]))}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date in '" + s + "'");
    }
    double t = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * 86400.0 +
               std::stoi(m[4]) * 3600.0 + std::stoi(m[5]) * 60.0 + std::stoi(m[6]);
    if (m[7].matched) {
        t += std::stod("0" + m[7].str());
    }
    if (m[8].matched && m[8].str() != "Z") {
        std::string off = m[8].str();
        off.erase(std::remove(off.begin(), off.end(), ':'), off.end());
        const int sign = off[0] == '-' ? -1 : 1;
        const int hh = std::stoi(off.substr(1, 2));
        const int mm = std::stoi(off.substr(3, 2));
        t -= sign * (hh * 3600.0 + mm * 60.0);
    }
    return t;
}

namespace {

template <typename F>
void for_each_json_line(std::istream& in, F&& f)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const json j = json::parse(line);
            if (!j.is_object()) {
                throw std::invalid_argument("expected a JSON object");
            }
            f(j);
        } catch (const json::exception& e) {
            throw FormatError(e.what(), lineno);
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what(), lineno);
        }
    }
}

std::string require_string(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_string()) {
        throw std::invalid_argument(std::string("missing string field '") + key + "'");
    }
    return j[key].get<std::string>();
}

double require_time(const json& j)
{
    if (!j.contains("time")) {
        throw std::invalid_argument("missing field 'time'");
    }
    return parse_time(j["time"]);
}

void check_id(const std::string& id)
{
    if (id.find_first_of(",\n\r\"") != std::string::npos) {
        throw std::invalid_argument("user id '" + id + "' cannot be written to CSV");
    }
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
        out.back().pop_back();
    }
    return out;
}

double to_double(const std::string& s, std::size_t lineno)
{
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw FormatError("invalid number '" + s + "'", lineno);
    }
    return v;
}

template <typename F>
void for_each_csv_row(std::istream& in, const std::string& header, F&& f)
{
    std::string line;
    std::size_t lineno = 0;
    bool seen_header = false;
    const std::size_t n_cols = split_csv(header).size();
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!seen_header) {
            if (line != header) {
                throw FormatError("expected header '" + header + "'", lineno);
            }
            seen_header = true;
            continue;
        }
        const auto cols = split_csv(line);
        if (cols.size() != n_cols) {
            throw FormatError("expected " + std::to_string(n_cols) + " columns", lineno);
        }
        f(cols, lineno);
    }
}

} // namespace

std::vector<Document> read_documents(std::istream& in)
{
    std::vector<Document> docs;
    for_each_json_line(in, [&](const json& j) {
        docs.push_back({require_string(j, "user"), require_time(j), require_string(j, "text")});
    });
    return docs;
}

std::vector<Event> read_events(std::istream& in)
{
    std::vector<Event> events;
    for_each_json_line(in, [&](const json& j) {
        Event e;
        e.user = require_string(j, "user");
        e.time = require_time(j);
        if (!j.contains("vector") || !j["vector"].is_array()) {
            throw std::invalid_argument("missing array field 'vector'");
        }
        for (const auto& v : j["vector"]) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                throw std::invalid_argument("vector entries must be finite numbers");
            }
            e.vector.push_back(v.get<double>());
        }
        if (!events.empty() && e.vector.size() != events.front().vector.size()) {
            throw std::invalid_argument("vector dimension differs from the first event");
        }
        events.push_back(std::move(e));
    });
    return events;
}

void write_events(std::ostream& out, std::span<const Event> events)
{
    for (const Event& e : events) {
        out << "{\"user\":" << json(e.user).dump() << ",\"time\":" << fixed(e.time, 6)
            << ",\"vector\":[";
        for (std::size_t i = 0; i < e.vector.size(); ++i) {
            out << (i ? "," : "") << fixed(e.vector[i]);
        }
        out << "]}\n";
    }
}

void write_edges_csv(std::ostream& out, std::span<const EdgeScore> edges)
{
    out << "source,target,te,mi,n_triples\n";
    for (const EdgeScore& e : edges) {
        check_id(e.source);
        check_id(e.target);
        out << e.source << ',' << e.target << ',' << fixed(e.transfer_entropy) << ','
            << fixed(e.time_delayed_mi) << ',' << e.n_triples << '\n';
    }
}

std::vector<EdgeScore> read_edges_csv(std::istream& in)
{
    std::vector<EdgeScore> edges;
    for_each_csv_row(in, "source,target,te,mi,n_triples",
                     [&](const std::vector<std::string>& c, std::size_t lineno) {
                         EdgeScore e;
                         e.source = c[0];
                         e.target = c[1];
                         e.transfer_entropy = to_double(c[2], lineno);
                         e.time_delayed_mi = to_double(c[3], lineno);
                         e.n_triples = static_cast<std::size_t>(to_double(c[4], lineno));
                         edges.push_back(std::move(e));
                     });
    return edges;
}

void write_histogram_csv(std::ostream& out, const Histogram& h)
{
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out << fixed(h.edges[b]) << ',' << fixed(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    }
}

void write_truth_csv(std::ostream& out, std::span<const TruthEdge> edges)
{
    out << "source,target,p\n";
    for (const TruthEdge& e : edges) {
        check_id(e.source);
        check_id(e.target);
        out << e.source << ',' << e.target << ',' << fixed(e.p, 6) << '\n';
    }
}

std::vector<TruthEdge> read_truth_csv(std::istream& in)
{
    std::vector<TruthEdge> edges;
    for_each_csv_row(in, "source,target,p",
                     [&](const std::vector<std::string>& c, std::size_t lineno) {
                         edges.push_back({c[0], c[1], to_double(c[2], lineno)});
                     });
    return edges;
}

std::vector<TruthEdge> truth_edges(const PlantedNetworkSpec& spec)
{
    std::vector<TruthEdge> out;
    for (const PlantedEdge& e : spec.edges) {
        out.push_back({spec.user_name(e.source), spec.user_name(e.target), e.p});
    }
    return out;
}

json evaluation_json(const RankingEvaluation& ev)
{
    return json{{"auc", ev.auc},
                {"n_pos", ev.n_pos},
                {"n_neg", ev.n_neg},
                {"null_stderr", ev.null_stderr},
                {"cutoff", ev.cutoff},
                {"precision_at_k", ev.precision_at_k},
                {"recall_at_k", ev.recall_at_k}};
}

PlantedNetworkSpec planted_spec_from_json(const json& j)
{
    if (!j.is_object()) {
        throw std::invalid_argument("spec: expected a JSON object");
    }
    static const std::set<std::string> known = {"n_users",     "edges",         "topic_dim",
                                                "active_topics", "events_per_user", "noise_scale",
                                                "mean_interval", "seed"};
    PlantedNetworkSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument(key + ": unknown field");
        }
    }
    const auto uint_field = [&](const char* key, std::size_t& dst) {
        if (j.contains(key)) {
            if (!j[key].is_number_unsigned()) {
                throw std::invalid_argument(std::string(key) + ": expected a nonnegative integer");
            }
            dst = j[key].get<std::size_t>();
        }
    };
    const auto real_field = [&](const char* key, double& dst) {
        if (j.contains(key)) {
            if (!j[key].is_number()) {
                throw std::invalid_argument(std::string(key) + ": expected a number");
            }
            dst = j[key].get<double>();
        }
    };
    uint_field("n_users", spec.n_users);
    uint_field("topic_dim", spec.topic_dim);
    uint_field("active_topics", spec.active_topics);
    uint_field("events_per_user", spec.events_per_user);
    real_field("noise_scale", spec.noise_scale);
    real_field("mean_interval", spec.mean_interval);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) {
            throw std::invalid_argument("seed: expected a nonnegative integer");
        }
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) {
            throw std::invalid_argument("edges: expected an array");
        }
        for (const auto& e : j["edges"]) {
            if (!e.is_object() || !e.contains("source") || !e.contains("target") ||
                !e.contains("p") || !e["source"].is_number_unsigned() ||
                !e["target"].is_number_unsigned() || !e["p"].is_number()) {
                throw std::invalid_argument(
                    "edges: each edge needs integer 'source', 'target' and numeric 'p'");
            }
            spec.edges.push_back({e["source"].get<std::size_t>(), e["target"].get<std::size_t>(),
                                  e["p"].get<double>()});
        }
    }
    spec.validate();
    return spec;
}

} // namespace cte::io
