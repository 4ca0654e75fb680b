#pragma once

#include "rat.hpp"

#include <initializer_list>
#include <ostream>

namespace intervaldyn {

// Canonical finite union of disjoint closed intervals: components sorted,
// pairwise non-adjacent (touching or overlapping components are merged), so
// equal sets compare equal componentwise. Degenerate components are points.
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::initializer_list<Interval> comps)
        : comps_(comps) { normalize(); }
    explicit IntervalSet(std::vector<Interval> comps)
        : comps_(std::move(comps)) { normalize(); }
    explicit IntervalSet(const Interval& I) : comps_{I} {}

    static IntervalSet empty() { return IntervalSet(); }

    const std::vector<Interval>& components() const { return comps_; }
    bool is_empty() const { return comps_.empty(); }
    size_t size() const { return comps_.size(); }

    void add(const Interval& I) {
        comps_.push_back(I);
        normalize();
    }
    void add_point(const Rat& x) { add(Interval::point(x)); }

    bool contains(const Rat& x) const {
        for (const auto& c : comps_)
            if (c.contains(x)) return true;
        return false;
    }
    bool contains(const IntervalSet& o) const {
        for (const auto& oc : o.comps_) {
            bool inside = false;
            for (const auto& c : comps_)
                if (c.contains(oc)) { inside = true; break; }
            if (!inside) return false;
        }
        return true;
    }
    bool intersects(const Interval& I) const {
        for (const auto& c : comps_)
            if (c.intersects(I)) return true;
        return false;
    }

    Rat measure() const {
        Rat s = 0;
        for (const auto& c : comps_) s += c.length();
        return s;
    }

    Interval hull() const {
        if (comps_.empty()) throw std::logic_error("IntervalSet::hull: empty set");
        return Interval(comps_.front().lo, comps_.back().hi);
    }

    IntervalSet unite(const IntervalSet& o) const {
        std::vector<Interval> all = comps_;
        all.insert(all.end(), o.comps_.begin(), o.comps_.end());
        return IntervalSet(std::move(all));
    }

    IntervalSet intersect(const IntervalSet& o) const {
        std::vector<Interval> out;
        for (const auto& a : comps_)
            for (const auto& b : o.comps_)
                if (a.intersects(b)) out.push_back(a.intersect(b));
        return IntervalSet(std::move(out));
    }

    // Set difference this \ o, as a closed outer cover: open gaps are closed.
    IntervalSet subtract(const IntervalSet& o) const {
        std::vector<Interval> cur = comps_;
        for (const auto& b : o.comps_) {
            std::vector<Interval> next;
            for (const auto& a : cur) {
                if (!a.intersects(b)) { next.push_back(a); continue; }
                if (b.lo > a.lo) next.push_back(Interval(a.lo, rat_min(a.hi, b.lo)));
                if (b.hi < a.hi) next.push_back(Interval(rat_max(a.lo, b.hi), a.hi));
            }
            cur = std::move(next);
        }
        return IntervalSet(std::move(cur));
    }

    bool all_degenerate() const {
        for (const auto& c : comps_)
            if (!c.degenerate()) return false;
        return true;
    }

    bool operator==(const IntervalSet& o) const {
        if (comps_.size() != o.comps_.size()) return false;
        for (size_t i = 0; i < comps_.size(); ++i)
            if (comps_[i] != o.comps_[i]) return false;
        return true;
    }
    bool operator!=(const IntervalSet& o) const { return !(*this == o); }

private:
    void normalize() {
        std::sort(comps_.begin(), comps_.end(), [](const Interval& a, const Interval& b) {
            return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
        });
        std::vector<Interval> merged;
        for (const auto& c : comps_) {
            if (!merged.empty() && c.lo <= merged.back().hi) {
                if (c.hi > merged.back().hi) merged.back().hi = c.hi;
            } else {
                merged.push_back(c);
            }
        }
        comps_ = std::move(merged);
    }

    std::vector<Interval> comps_;
};

inline std::ostream& operator<<(std::ostream& os, const IntervalSet& s) {
    os << "{";
    for (size_t i = 0; i < s.components().size(); ++i) {
        if (i) os << ", ";
        os << interval_str(s.components()[i]);
    }
    return os << "}";
}

}  // namespace intervaldyn
