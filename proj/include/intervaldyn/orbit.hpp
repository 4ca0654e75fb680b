#pragma once

#include "sided.hpp"

#include <array>
#include <functional>
#include <map>
#include <set>

namespace intervaldyn {

// Caches f, f^2, ..., built incrementally by composition.
class PowerCache {
public:
    explicit PowerCache(PLMap f, size_t knot_cap = kDefaultKnotCap)
        : knot_cap_(knot_cap) { pows_.push_back(std::move(f)); }

    const PLMap& get(long n) {
        if (n < 1) throw std::invalid_argument("PowerCache: n >= 1");
        while (static_cast<long>(pows_.size()) < n)
            pows_.push_back(PLMap::compose(pows_.front(), pows_.back(), knot_cap_));
        return pows_[n - 1];
    }

    const PLMap& base() const { return pows_.front(); }

private:
    size_t knot_cap_;
    std::vector<PLMap> pows_;
};

struct PeriodicPoint {
    Rat x;
    long minimal_period = 1;
    bool reversing = false;
};

// A maximal interval on which f^n is the identity: a continuum of fixed
// points of f^n, reported instead of an impossible enumeration.
struct PeriodicContinuum {
    Interval range;
    long minimal_period = 1;
};

struct PeriodicPointsResult {
    std::vector<PeriodicPoint> points;
    std::vector<PeriodicContinuum> continua;
};

// True iff for some eta > 0 the m-th image of [z, z+eta] lies in [0,z] and of
// [z-eta, z] in [z,1]; decided from the one-sided slopes of f^m at z.
// A missing side (z at an endpoint) satisfies its clause vacuously.
inline bool is_reversing(const PLMap& f, const Rat& z, long m) {
    if (f.eval_iter(z, m) != z)
        throw std::invalid_argument("is_reversing: point is not m-periodic");
    bool right_ok = true, left_ok = true;
    if (z < 1) right_ok = iterated_side_slope(f, z, Side::R, m) <= 0;
    if (z > 0) left_ok = iterated_side_slope(f, z, Side::L, m) <= 0;
    return right_ok && left_ok;
}

namespace detail {

// True iff g (a power of f) restricted to I is the identity: PL, so it
// suffices to check the knots inside and the endpoints.
inline bool is_identity_on(const PLMap& g, const Interval& I) {
    if (g.eval(I.lo) != I.lo || g.eval(I.hi) != I.hi) return false;
    for (const auto& x : g.grid())
        if (I.strictly_contains(x) && g.eval(x) != x) return false;
    return true;
}

}  // namespace detail

// All solutions of f^n(x) = x, found branch by branch on the exact f^n.
// Identity branches are reported as continua.
inline PeriodicPointsResult periodic_points(const PLMap& f, long n, PowerCache* cache = nullptr,
                                            size_t knot_cap = kDefaultKnotCap) {
    PowerCache local(f, knot_cap);
    PowerCache& pc = cache ? *cache : local;
    const PLMap& g = pc.get(n);

    PeriodicPointsResult res;
    std::vector<Rat> roots;
    std::vector<Interval> id_ranges;
    for (size_t i = 0; i + 1 < g.grid().size(); ++i) {
        const Rat &a = g.grid()[i], &b = g.grid()[i + 1];
        const Rat &ya = g.values()[i], &yb = g.values()[i + 1];
        Rat m = (yb - ya) / (b - a);
        if (m == 1) {
            if (ya == a) id_ranges.push_back(Interval(a, b));
            continue;
        }
        Rat x = (ya - m * a) / (1 - m);
        if (a <= x && x <= b) roots.push_back(x);
    }
    IntervalSet continua(id_ranges);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

    for (const auto& c : continua.components()) {
        long mp = n;
        for (long d = 1; d < n; ++d)
            if (n % d == 0 && detail::is_identity_on(pc.get(d), c)) { mp = d; break; }
        res.continua.push_back({c, mp});
    }
    for (const auto& x : roots) {
        if (continua.contains(x)) continue;
        long mp = n;
        for (long d = 1; d < n; ++d)
            if (n % d == 0 && f.eval_iter(x, d) == x) { mp = d; break; }
        res.points.push_back({x, mp, is_reversing(f, x, mp)});
    }
    return res;
}

// The set of minimal periods <= N realized by the map.
inline std::set<long> period_set(const PLMap& f, long N, size_t knot_cap = kDefaultKnotCap) {
    PowerCache pc(f, knot_cap);
    std::set<long> periods;
    for (long n = 1; n <= N; ++n) {
        auto r = periodic_points(f, n, &pc, knot_cap);
        for (const auto& p : r.points)
            if (p.minimal_period <= N) periods.insert(p.minimal_period);
        for (const auto& c : r.continua)
            if (c.minimal_period <= N) periods.insert(c.minimal_period);
    }
    return periods;
}

enum class Ordering { Less, Equal, Greater };

namespace detail {

// Canonical factorization n = 2^a (2b+1).
inline std::pair<long, long> two_power_split(long n) {
    long a = 0;
    while (n % 2 == 0) { n /= 2; ++a; }
    return {a, (n - 1) / 2};
}

// Lexicographic key: smaller key = earlier (stronger) in the Sharkovskii order
// 3 > 5 > ... > 2*3 > 2*5 > ... > 8 > 4 > 2 > 1.
inline std::array<long, 3> sharkovskii_key(long n) {
    auto [a, b] = two_power_split(n);
    if (b >= 1) return {0, a, b};
    return {1, -a, 0};
}

}  // namespace detail

// Greater means p precedes (forces) q.
inline Ordering sharkovskii_compare(long p, long q) {
    if (p < 1 || q < 1) throw std::domain_error("sharkovskii_compare: arguments must be >= 1");
    if (p == q) return Ordering::Equal;
    return detail::sharkovskii_key(p) < detail::sharkovskii_key(q) ? Ordering::Greater
                                                                   : Ordering::Less;
}

// True iff the set is downward closed in the Sharkovskii order within
// [1, range] (range defaults to max of the set).
inline bool sharkovskii_consistent(const std::set<long>& periods, long range = 0) {
    if (periods.empty()) return true;
    if (range == 0) range = *periods.rbegin();
    for (long p : periods)
        for (long q = 1; q <= range; ++q)
            if (sharkovskii_compare(p, q) == Ordering::Greater && !periods.count(q))
                return false;
    return true;
}

struct LSchemeWitness {
    Rat x, y;       // fixed point x; mirrored = false: f^2 y <= x < y < f y
    bool mirrored;  // mirrored = true: f y < y < x <= f^2 y
};

namespace detail {

// One-variable linear constraint solving on a branch where both f and f^2 are
// linear: returns a rational y in the feasible region, if any.
struct LinearOnBranch {
    // value at t: c0 + c1 * t
    Rat c0, c1;
    Rat at(const Rat& t) const { return c0 + c1 * t; }
};

inline std::optional<Rat> feasible_point(const Interval& branch,
                                         const LinearOnBranch& fy,
                                         const LinearOnBranch& f2y,
                                         const Rat& x, bool mirrored) {
    // Constraints (plain):   y > x,  fy(y) - y > 0,  f2y(y) - x <= 0
    // Constraints (mirror):  y < x,  fy(y) - y < 0,  f2y(y) - x >= 0
    Rat lo = branch.lo, hi = branch.hi;
    bool lo_open = false, hi_open = false;
    auto clamp_gt = [&](const Rat& bound, bool strict) {  // y > bound (or >=)
        if (bound > lo || (bound == lo && strict && !lo_open)) { lo = bound; lo_open = strict; }
    };
    auto clamp_lt = [&](const Rat& bound, bool strict) {
        if (bound < hi || (bound == hi && strict && !hi_open)) { hi = bound; hi_open = strict; }
    };
    auto linear_constraint = [&](const Rat& a0, const Rat& a1, bool ge, bool strict) -> bool {
        // a0 + a1*y >= 0 (ge) or <= 0 (!ge); strict for >/<.
        if (a1 == 0) {
            if (ge) return strict ? a0 > 0 : a0 >= 0;
            return strict ? a0 < 0 : a0 <= 0;
        }
        Rat root = -a0 / a1;
        bool upward = a1 > 0;  // increasing in y
        if (ge == upward) clamp_gt(root, strict);
        else clamp_lt(root, strict);
        return true;
    };
    bool ok = true;
    if (!mirrored) {
        clamp_gt(x, true);
        ok = ok && linear_constraint(fy.c0, fy.c1 - 1, true, true);    // fy - y > 0
        ok = ok && linear_constraint(f2y.c0 - x, f2y.c1, false, false);  // f2y - x <= 0
    } else {
        clamp_lt(x, true);
        ok = ok && linear_constraint(fy.c0, fy.c1 - 1, false, true);   // fy - y < 0
        ok = ok && linear_constraint(f2y.c0 - x, f2y.c1, true, false);   // f2y - x >= 0
    }
    if (!ok) return std::nullopt;
    if (lo > hi) return std::nullopt;
    if (lo == hi) {
        if (lo_open || hi_open) return std::nullopt;
        return lo;
    }
    if (!lo_open) return lo;
    if (!hi_open) return hi;
    return Rat((lo + hi) / 2);
}

}  // namespace detail

// Searches for a fixed point x and a point y with f^2 y <= x < y < f y (or
// the mirrored configuration). Complete over branch-wise candidates: on each
// sub-branch where f and f^2 are both linear the constraints are linear, so
// feasibility is decided exactly.
inline std::optional<LSchemeWitness> has_L_scheme(const PLMap& f, size_t knot_cap = kDefaultKnotCap) {
    PLMap g = f.power(2, knot_cap);
    // Candidate fixed points: isolated ones and continuum endpoints.
    std::vector<Rat> fixed;
    auto pp = periodic_points(f, 1);
    for (const auto& p : pp.points) fixed.push_back(p.x);
    for (const auto& c : pp.continua) {
        fixed.push_back(c.range.lo);
        fixed.push_back(c.range.hi);
    }
    // Sub-branches: split g's pieces at f's knots.
    std::vector<Rat> cuts = g.grid();
    for (const auto& t : f.grid()) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (const Rat& x : fixed) {
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            Interval br(cuts[i], cuts[i + 1]);
            Rat fa = f.eval(br.lo), fb = f.eval(br.hi);
            Rat ga = g.eval(br.lo), gb = g.eval(br.hi);
            detail::LinearOnBranch fy{(fa * br.hi - fb * br.lo) / br.length(), (fb - fa) / br.length()};
            detail::LinearOnBranch f2y{(ga * br.hi - gb * br.lo) / br.length(), (gb - ga) / br.length()};
            for (bool mirrored : {false, true}) {
                auto y = detail::feasible_point(br, fy, f2y, x, mirrored);
                if (!y) continue;
                // Exact verification, independent of the solver path.
                Rat Fy = f.eval(*y), F2y = f.eval(Fy);
                bool ok = !mirrored ? (F2y <= x && x < *y && *y < Fy)
                                    : (Fy < *y && *y < x && x <= F2y);
                if (ok) return LSchemeWitness{x, *y, mirrored};
            }
        }
    }
    return std::nullopt;
}

// True iff every k <= k_max divides some element of A.
inline bool multiples_condition(const std::set<long>& A, long k_max) {
    for (long k = 1; k <= k_max; ++k) {
        bool found = false;
        for (long n : A)
            if (n % k == 0) { found = true; break; }
        if (!found) return false;
    }
    return true;
}

inline bool multiples_condition(const std::function<bool(long)>& in_A, long bound, long k_max) {
    for (long k = 1; k <= k_max; ++k) {
        bool found = false;
        for (long n = k; n <= bound; n += k)
            if (in_A(n)) { found = true; break; }
        if (!found) return false;
    }
    return true;
}

}  // namespace intervaldyn
