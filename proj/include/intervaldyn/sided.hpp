#pragma once

#include "plmap.hpp"

namespace intervaldyn {

enum class Side { L, R };

inline Side flip(Side s) { return s == Side::L ? Side::R : Side::L; }
inline std::string side_str(Side s) { return s == Side::L ? "L" : "R"; }

// A point together with a side, the unit of one-sided dynamics. The ambient
// convention: at the left end of the ambient interval only R is a side, at
// the right end only L.
struct SidedPoint {
    Rat x;
    Side side;

    bool operator==(const SidedPoint& o) const { return x == o.x && side == o.side; }
};

// Sides of x available inside the ambient interval A.
inline std::vector<Side> sides_in(const Rat& x, const Interval& A) {
    if (!A.contains(x)) throw std::domain_error("sides_in: point outside ambient interval");
    std::vector<Side> out;
    if (x > A.lo) out.push_back(Side::L);
    if (x < A.hi) out.push_back(Side::R);
    return out;
}

// Slope of the linear piece adjacent to x on the given side, or nullopt when
// that side does not exist in [0,1].
inline std::optional<Rat> one_sided_slope(const PLMap& f, const Rat& x, Side s) {
    if (s == Side::L) {
        if (x == 0) return std::nullopt;
        size_t i = f.piece_containing(x);
        if (x == f.grid()[i]) i -= 1;  // knot: take the piece ending at x
        return f.slope(i);
    }
    if (x == 1) return std::nullopt;
    size_t i = f.piece_containing(x);
    if (x == f.grid()[i + 1]) i += 1;
    return f.slope(i);
}

// The pair image f(x,T): the set of (fx, S) such that every one-sided
// neighborhood W_T(x) has image containing some W_S(fx). Empty when f is
// locally constant on that side (Property C2 contrapositive), and a single
// pair otherwise: the image side is determined by the sign of the adjacent
// slope.
inline std::vector<SidedPoint> pair_image(const PLMap& f, const SidedPoint& p) {
    auto sl = one_sided_slope(f, p.x, p.side);
    if (!sl) throw std::domain_error("pair_image: side does not exist at " + rat_str(p.x));
    if (*sl == 0) return {};
    Side out = (*sl > 0) ? p.side : flip(p.side);
    return {SidedPoint{f.eval(p.x), out}};
}

// n-fold pair image; nullopt when a degenerate side is hit along the way.
inline std::optional<SidedPoint> pair_image_iter(const PLMap& f, SidedPoint p, long n) {
    for (long k = 0; k < n; ++k) {
        auto img = pair_image(f, p);
        if (img.empty()) return std::nullopt;
        p = img.front();
    }
    return p;
}

// Signed one-sided slope of f^m at z obtained by tracking the side along the
// orbit; returns 0 when the image collapses (a constant piece is met).
inline Rat iterated_side_slope(const PLMap& f, const Rat& z, Side s, long m) {
    Rat prod = 1;
    Rat w = z;
    Side cur = s;
    for (long k = 0; k < m; ++k) {
        auto sl = one_sided_slope(f, w, cur);
        if (!sl || *sl == 0) return Rat(0);
        prod *= *sl;
        cur = (*sl > 0) ? cur : flip(cur);
        w = f.eval(w);
    }
    return prod;
}

}  // namespace intervaldyn
