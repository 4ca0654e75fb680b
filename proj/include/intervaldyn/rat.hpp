#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace intervaldyn {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown when a configured resource limit (knot cap, refinement cap, ...) is hit.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    return Rat(Int(num), Int(den));
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Parses "p/q" or a plain integer "p".
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rat: bad rational '" + s + "'");
    }
}

inline std::string rat_str(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// Closed interval [lo, hi]; degenerate (lo == hi) allowed.
struct Interval {
    Rat lo, hi;

    Interval() : lo(0), hi(0) {}
    Interval(Rat a, Rat b) : lo(std::move(a)), hi(std::move(b)) {
        if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
    }
    static Interval point(const Rat& x) { return Interval(x, x); }

    Rat length() const { return hi - lo; }
    bool degenerate() const { return lo == hi; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool strictly_contains(const Rat& x) const { return lo < x && x < hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

    Interval hull(const Interval& o) const {
        return Interval(rat_min(lo, o.lo), rat_max(hi, o.hi));
    }
    // Precondition: intersects(o).
    Interval intersect(const Interval& o) const {
        return Interval(rat_max(lo, o.lo), rat_min(hi, o.hi));
    }
    Rat midpoint() const { return (lo + hi) / 2; }

    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
    bool operator!=(const Interval& o) const { return !(*this == o); }
};

inline std::string interval_str(const Interval& I) {
    return "[" + rat_str(I.lo) + ", " + rat_str(I.hi) + "]";
}

}  // namespace intervaldyn
