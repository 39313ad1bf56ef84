#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "cte/estimators.hpp"

namespace cte {

/// One timestamped content vector emitted by one user.
struct Event {
    std::string user;
    double time = 0.0; // seconds
    std::vector<double> vector;
};

/// All events of one user, ascending by time. Equal timestamps keep their
/// input order.
struct EventStream {
    std::string user;
    std::vector<Event> events;

    std::size_t size() const noexcept { return events.size(); }
    /// Dimension of the event vectors (0 for an empty stream).
    std::size_t dim() const noexcept { return events.empty() ? 0 : events.front().vector.size(); }
    /// Throws std::invalid_argument if events are out of order, belong to a
    /// different user, or vary in dimension.
    void validate() const;
};

/// Groups events by user. Streams come back ordered by user id, events
/// stably sorted by time.
std::vector<EventStream> group_streams(std::vector<Event> events);

/// Joint samples (x = target future, y = source past, z = target past) for
/// one ordered pair, with the timestamps behind each triple.
struct TripleSet {
    std::string source;
    std::string target;
    JointSamples triples;
    /// {time of target past, time of source past, time of target future}
    std::vector<std::array<double, 3>> times;

    std::size_t count() const noexcept { return triples.size(); }
};

/// For each consecutive pair of target events (past at t1, future at t2,
/// t1 < t2) emits a triple when the source has an event strictly inside
/// (t1, t2); the most recent such source event is used.
TripleSet build_triples(const EventStream& target, const EventStream& source);

/// Consecutive-event pairs of one stream: x = later event, y = earlier
/// event, no conditioning block. Empty for fewer than two events.
JointSamples self_pairs(const EventStream& target);

} // namespace cte
