#include "cte/triples.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cte {

void EventStream::validate() const
{
    const std::size_t d = dim();
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        if (e.user != user) {
            throw std::invalid_argument("EventStream '" + user + "': foreign event from '" +
                                        e.user + "'");
        }
        if (!std::isfinite(e.time)) {
            throw std::invalid_argument("EventStream '" + user + "': non-finite timestamp");
        }
        if (e.vector.size() != d) {
            throw std::invalid_argument("EventStream '" + user + "': vector dimension varies");
        }
        if (i > 0 && e.time < events[i - 1].time) {
            throw std::invalid_argument("EventStream '" + user + "': events not sorted by time");
        }
    }
}

std::vector<EventStream> group_streams(std::vector<Event> events)
{
    std::map<std::string, EventStream> by_user;
    for (Event& e : events) {
        auto& s = by_user[e.user];
        s.user = e.user;
        s.events.push_back(std::move(e));
    }
    std::vector<EventStream> out;
    out.reserve(by_user.size());
    for (auto& [user, s] : by_user) {
        std::stable_sort(s.events.begin(), s.events.end(),
                         [](const Event& a, const Event& b) { return a.time < b.time; });
        out.push_back(std::move(s));
    }
    return out;
}

TripleSet build_triples(const EventStream& target, const EventStream& source)
{
    target.validate();
    source.validate();
    if (!target.events.empty() && !source.events.empty() && target.dim() != source.dim()) {
        throw std::invalid_argument("build_triples: vector dimension mismatch between '" +
                                    target.user + "' and '" + source.user + "'");
    }
    const std::size_t dx = target.dim();
    const std::size_t dy = source.events.empty() ? dx : source.dim();

    TripleSet out;
    out.source = source.user;
    out.target = target.user;
    out.triples = JointSamples{PointSet(dx), PointSet(dy), PointSet(dx)};

    const auto& src = source.events;
    for (std::size_t t = 0; t + 1 < target.events.size(); ++t) {
        const Event& past = target.events[t];
        const Event& future = target.events[t + 1];
        if (!(past.time < future.time)) {
            continue;
        }
        // Last source event strictly before the future event.
        auto it = std::lower_bound(src.begin(), src.end(), future.time,
                                   [](const Event& e, double v) { return e.time < v; });
        if (it == src.begin()) {
            continue;
        }
        const Event& recent = *std::prev(it);
        if (!(recent.time > past.time)) {
            continue;
        }
        out.triples.x.push_back(future.vector);
        out.triples.y.push_back(recent.vector);
        out.triples.z->push_back(past.vector);
        out.times.push_back({past.time, recent.time, future.time});
    }
    return out;
}

JointSamples self_pairs(const EventStream& target)
{
    target.validate();
    const std::size_t d = target.dim();
    JointSamples out{PointSet(d), PointSet(d), std::nullopt};
    for (std::size_t t = 0; t + 1 < target.events.size(); ++t) {
        out.x.push_back(target.events[t + 1].vector);
        out.y.push_back(target.events[t].vector);
    }
    return out;
}

} // namespace cte
