#pragma once

#include "intervalset.hpp"

#include <istream>
#include <optional>
#include <sstream>
#include <utility>

namespace intervaldyn {

constexpr size_t kDefaultKnotCap = 1000000;

// Continuous piecewise-linear self-map of [0,1] with exact rational knots.
// Knots are kept normalized: strictly increasing x, first x = 0, last x = 1,
// no interior knot where the two adjacent segments are collinear. Constant
// (slope 0) pieces are allowed.
class PLMap {
public:
    PLMap(std::vector<Rat> xs, std::vector<Rat> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
        validate();
        normalize();
    }

    static PLMap from_pairs(const std::vector<std::pair<Rat, Rat>>& knots) {
        std::vector<Rat> xs, ys;
        xs.reserve(knots.size());
        ys.reserve(knots.size());
        for (const auto& [x, y] : knots) {
            xs.push_back(x);
            ys.push_back(y);
        }
        return PLMap(std::move(xs), std::move(ys));
    }

    static PLMap identity() { return PLMap({Rat(0), Rat(1)}, {Rat(0), Rat(1)}); }

    const std::vector<Rat>& grid() const { return xs_; }
    const std::vector<Rat>& values() const { return ys_; }
    size_t knot_count() const { return xs_.size(); }
    size_t piece_count() const { return xs_.size() - 1; }

    Interval piece_domain(size_t i) const { return Interval(xs_[i], xs_[i + 1]); }

    Rat slope(size_t i) const {
        return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    }

    // Leftmost piece index i with xs_[i] <= x <= xs_[i+1].
    size_t piece_containing(const Rat& x) const {
        if (x < 0 || x > 1) throw std::domain_error("PLMap: point outside [0,1]");
        size_t lo = 0, hi = xs_.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            if (xs_[mid] <= x) lo = mid; else hi = mid;
        }
        return lo == xs_.size() - 1 ? lo - 1 : lo;
    }

    Rat operator()(const Rat& x) const { return eval(x); }

    Rat eval(const Rat& x) const {
        size_t i = piece_containing(x);
        if (x == xs_[i]) return ys_[i];
        if (x == xs_[i + 1]) return ys_[i + 1];
        return ys_[i] + (x - xs_[i]) * (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    }

    Rat eval_iter(Rat x, long n) const {
        for (long k = 0; k < n; ++k) x = eval(x);
        return x;
    }

    // Exact image of a closed interval: hull of the values at the endpoints
    // and at the knots strictly inside.
    Interval image_of(const Interval& I) const {
        Rat lo = eval(I.lo), hi = lo;
        auto upd = [&](const Rat& v) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        };
        upd(eval(I.hi));
        size_t i = piece_containing(I.lo);
        for (size_t k = i + 1; k < xs_.size() - 1 && xs_[k] < I.hi; ++k)
            if (xs_[k] > I.lo) upd(ys_[k]);
        return Interval(lo, hi);
    }

    IntervalSet image_of(const IntervalSet& s) const {
        std::vector<Interval> out;
        out.reserve(s.size());
        for (const auto& c : s.components()) out.push_back(image_of(c));
        return IntervalSet(std::move(out));
    }

    // Full preimage f^{-1}(y): points from crossing pieces, intervals from
    // plateaus at height y.
    IntervalSet preimages(const Rat& y) const {
        if (y < 0 || y > 1) throw std::domain_error("preimages: value outside [0,1]");
        std::vector<Interval> out;
        for (size_t i = 0; i + 1 < xs_.size(); ++i) {
            const Rat& ya = ys_[i];
            const Rat& yb = ys_[i + 1];
            if (ya == yb) {
                if (ya == y) out.push_back(piece_domain(i));
                continue;
            }
            if ((ya <= y && y <= yb) || (yb <= y && y <= ya)) {
                Rat x = xs_[i] + (y - ya) * (xs_[i + 1] - xs_[i]) / (yb - ya);
                out.push_back(Interval::point(x));
            }
        }
        return IntervalSet(std::move(out));
    }

    // Exact composition outer ∘ inner.
    static PLMap compose(const PLMap& outer, const PLMap& inner, size_t knot_cap = kDefaultKnotCap) {
        std::vector<Rat> xs, ys;
        auto push = [&](const Rat& x, const Rat& y) {
            if (!xs.empty() && xs.back() == x) return;
            xs.push_back(x);
            ys.push_back(y);
            if (xs.size() > knot_cap)
                throw ResourceError("compose: knot cap exceeded");
        };
        for (size_t i = 0; i + 1 < inner.xs_.size(); ++i) {
            const Rat &a = inner.xs_[i], &b = inner.xs_[i + 1];
            const Rat &ya = inner.ys_[i], &yb = inner.ys_[i + 1];
            push(a, outer.eval(ya));
            if (ya != yb) {
                // Cut the piece at preimages of the outer map's knots.
                Rat vlo = rat_min(ya, yb), vhi = rat_max(ya, yb);
                std::vector<Rat> cuts;
                for (size_t k = 1; k + 1 < outer.xs_.size(); ++k) {
                    const Rat& beta = outer.xs_[k];
                    if (vlo < beta && beta < vhi)
                        cuts.push_back(a + (beta - ya) * (b - a) / (yb - ya));
                }
                std::sort(cuts.begin(), cuts.end());
                for (const Rat& t : cuts) {
                    Rat ft = ya + (t - a) * (yb - ya) / (b - a);
                    push(t, outer.eval(ft));
                }
            }
        }
        push(inner.xs_.back(), outer.eval(inner.ys_.back()));
        return PLMap(std::move(xs), std::move(ys));
    }

    // Exact representation of the n-fold composition f^n.
    PLMap power(long n, size_t knot_cap = kDefaultKnotCap) const {
        if (n < 1) throw std::invalid_argument("power: n must be >= 1");
        PLMap acc = *this;
        for (long k = 1; k < n; ++k) acc = compose(*this, acc, knot_cap);
        return acc;
    }

    bool operator==(const PLMap& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }
    bool operator!=(const PLMap& o) const { return !(*this == o); }

    // Map file format: one knot per line, "x_num/x_den y_num/y_den",
    // '#' starts a comment.
    static PLMap parse(std::istream& in) {
        std::vector<Rat> xs, ys;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::istringstream ls(line);
            std::string xs_tok, ys_tok;
            if (!(ls >> xs_tok)) continue;
            if (!(ls >> ys_tok))
                throw std::invalid_argument("map parse: missing value on line " + std::to_string(lineno));
            std::string extra;
            if (ls >> extra)
                throw std::invalid_argument("map parse: trailing tokens on line " + std::to_string(lineno));
            xs.push_back(parse_rat(xs_tok));
            ys.push_back(parse_rat(ys_tok));
        }
        if (xs.size() < 2) throw std::invalid_argument("map parse: need at least two knots");
        return PLMap(std::move(xs), std::move(ys));
    }

    void write(std::ostream& os) const {
        for (size_t i = 0; i < xs_.size(); ++i)
            os << rat_str(xs_[i]) << " " << rat_str(ys_[i]) << "\n";
    }

private:
    void validate() const {
        if (xs_.size() != ys_.size() || xs_.size() < 2)
            throw std::invalid_argument("PLMap: need matching knot lists with >= 2 knots");
        if (xs_.front() != 0 || xs_.back() != 1)
            throw std::invalid_argument("PLMap: domain must be exactly [0,1]");
        for (size_t i = 0; i + 1 < xs_.size(); ++i)
            if (xs_[i] >= xs_[i + 1])
                throw std::invalid_argument("PLMap: breakpoints must be strictly increasing");
        for (const auto& y : ys_)
            if (y < 0 || y > 1)
                throw std::invalid_argument("PLMap: values must lie in [0,1]");
    }

    void normalize() {
        std::vector<Rat> xs{xs_.front()}, ys{ys_.front()};
        for (size_t i = 1; i + 1 < xs_.size(); ++i) {
            // Drop the knot when the neighbours are collinear through it.
            const Rat& xa = xs.back();
            const Rat& ya = ys.back();
            Rat lhs = (ys_[i] - ya) * (xs_[i + 1] - xs_[i]);
            Rat rhs = (ys_[i + 1] - ys_[i]) * (xs_[i] - xa);
            if (lhs != rhs) {
                xs.push_back(xs_[i]);
                ys.push_back(ys_[i]);
            }
        }
        xs.push_back(xs_.back());
        ys.push_back(ys_.back());
        xs_ = std::move(xs);
        ys_ = std::move(ys);
    }

    std::vector<Rat> xs_, ys_;
};

}  // namespace intervaldyn
