#pragma once

#include "entropy.hpp"

namespace intervaldyn {

// Outer approximation of a basic set B(orb I, f) at a refinement depth:
// cells of the refined partition inside the cycle from which every cell of
// the cycle is graph-reachable. Gaps are the discarded complementary
// intervals; their forward images stay in gaps (Step B6, by construction).
struct BasicSetApprox {
    CycleOfIntervals ambient;
    int depth = 0;
    IntervalSet outer;
    std::vector<Interval> gaps;
    std::vector<size_t> kept_cells;    // indices into `refined`
    MarkovSystem refined;
    bool refinement_shrank = true;     // kept cells got strictly finer at the last step
};

inline MarkovSystem refine_times(MarkovSystem ms, int depth) {
    for (int d = 0; d < depth; ++d) ms = ms.refine();
    return ms;
}

inline BasicSetApprox basic_set(const MarkovSystem& ms, const CycleOfIntervals& cycle, int depth) {
    IntervalSet M = cycle.as_set();
    if (ms.map().image_of(M) != M)
        throw std::invalid_argument("basic_set: cycle is not invariant");

    auto kept_at = [&](const MarkovSystem& sys) {
        std::vector<size_t> mcells = sys.cells_within(M);
        std::vector<char> in_m(sys.cell_count(), 0);
        for (size_t c : mcells) in_m[c] = 1;
        std::vector<size_t> kept;
        for (size_t c : mcells) {
            auto r = sys.reachable_from(c);
            bool all = true;
            for (size_t d : mcells)
                if (!r[d] && d != c) { all = false; break; }
            // The cell must also reach itself unless it is the only one.
            if (all && mcells.size() > 1 && !r[c]) all = false;
            if (all) kept.push_back(c);
        }
        return kept;
    };

    MarkovSystem prev = ms;
    MarkovSystem sys = refine_times(ms, depth);
    if (depth > 0) prev = refine_times(ms, depth - 1);

    auto kept = kept_at(sys);
    BasicSetApprox out{cycle, depth, sys.cells_to_set(kept), {}, kept, sys, true};
    out.gaps.clear();
    for (const auto& g : M.subtract(out.outer).components())
        if (!g.degenerate()) out.gaps.push_back(g);

    // Did refinement genuinely subdivide the kept region at the last step?
    if (depth > 0) {
        auto kept_prev = kept_at(prev);
        Rat mx_prev(0), mx(0);
        for (size_t c : kept_prev) mx_prev = rat_max(mx_prev, prev.cell(c).length());
        for (size_t c : kept) mx = rat_max(mx, sys.cell(c).length());
        out.refinement_shrank = (mx < mx_prev) || kept.empty();
    } else {
        out.refinement_shrank = true;
    }

    // Step B6: the image of every gap meets the outer set at most in points.
    for (const auto& g : out.gaps) {
        IntervalSet img({ms.map().image_of(g)});
        if (!img.intersect(out.outer).all_degenerate())
            throw std::logic_error("basic_set: gap image escaped into the outer set");
    }
    return out;
}

// Step B8: collapse every gap of the approximation to a point. The quotient
// is re-Markovized on its own knot set; Step B9 predicts irreducibility.
inline MarkovSystem collapse_map(const MarkovSystem& ms, const BasicSetApprox& b) {
    if (b.kept_cells.empty())
        throw std::invalid_argument("collapse_map: nothing kept");
    const MarkovSystem& sys = b.refined;
    // Quotient coordinates: cumulative kept length, rescaled to [0,1].
    Rat total(0);
    for (size_t c : b.kept_cells) total += sys.cell(c).length();
    std::vector<Rat> starts;  // quotient coordinate of each kept cell's left end
    Rat acc(0);
    for (size_t c : b.kept_cells) {
        starts.push_back(acc / total);
        acc += sys.cell(c).length();
    }
    auto phi = [&](const Rat& x) -> Rat {
        Rat q(0);
        for (size_t k = 0; k < b.kept_cells.size(); ++k) {
            Interval cell = sys.cell(b.kept_cells[k]);
            if (x < cell.lo) return q;
            if (x <= cell.hi) return starts[k] + (x - cell.lo) / total;
            q = starts[k] + cell.length() / total;
        }
        return Rat(1);
    };

    std::vector<std::pair<Rat, Rat>> knots;
    for (size_t k = 0; k < b.kept_cells.size(); ++k) {
        Interval cell = sys.cell(b.kept_cells[k]);
        // Cut the cell at preimages of partition points (f is linear here).
        Rat ya = sys.map().eval(cell.lo), yb = sys.map().eval(cell.hi);
        std::vector<Rat> cuts{cell.lo, cell.hi};
        if (ya != yb) {
            Rat vlo = rat_min(ya, yb), vhi = rat_max(ya, yb);
            for (const auto& p : sys.points())
                if (vlo < p && p < vhi)
                    cuts.push_back(cell.lo + (p - ya) * cell.length() / (yb - ya));
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (const auto& t : cuts)
            knots.emplace_back(phi(t), phi(sys.map().eval(t)));
    }
    std::sort(knots.begin(), knots.end(),
              [](const auto& a, const auto& b2) { return a.first < b2.first; });
    std::vector<Rat> xs, ys;
    for (const auto& [x, y] : knots) {
        if (!xs.empty() && xs.back() == x) {
            if (ys.back() != y)
                throw std::logic_error("collapse_map: quotient map ill-defined at a seam");
            continue;
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    PLMap g(std::move(xs), std::move(ys));
    return markovize_or_throw(g);
}

// Lemma 8.2 witnesses for a transitive system: a fixed point a in (0,1), a
// period-2 point, and an expanding interval a ∈ U ⊆ fU near a, plus the
// nested ladder U_i = f^i U (Corollary 8.4).
struct MixingStructures {
    Rat fixed_point;
    Rat period2_point;
    Interval expanding;
    std::vector<Interval> ladder;
};

inline MixingStructures mixing_structures(const MarkovSystem& ms, const Rat& eta, int ladder_len = 6) {
    if (!is_transitive(classify_transitivity(ms)))
        throw std::invalid_argument("mixing_structures: system is not transitive");
    if (eta <= 0) throw std::invalid_argument("mixing_structures: eta must be positive");
    const PLMap& f = ms.map();

    auto fixed = periodic_points(f, 1);
    std::vector<Rat> fixed_pts;
    for (const auto& p : fixed.points)
        if (p.x > 0 && p.x < 1) fixed_pts.push_back(p.x);

    // Interior rational of {z in [u,v] : c0 + c1 z > 0}, if the region is
    // non-degenerate.
    auto positive_sample = [](const Rat& u, const Rat& v, const Rat& c0, const Rat& c1)
        -> std::optional<Rat> {
        if (u >= v) return std::nullopt;
        Rat at_u = c0 + c1 * u, at_v = c0 + c1 * v;
        if (at_u > 0 && at_v > 0) return Rat((u + v) / 2);
        if (at_u <= 0 && at_v <= 0) return std::nullopt;
        Rat root = -c0 / c1;
        return at_u > 0 ? Rat((u + root) / 2) : Rat((root + v) / 2);
    };

    auto try_expanding = [&](const Rat& a) -> std::optional<Interval> {
        Interval window(rat_max(Rat(0), a - eta), rat_min(Rat(1), a + eta));
        // Direct (Lemma 8.1 easy case): z > a with f(z) > z gives U = [a,z];
        // mirrored on the left. Exact per linear piece.
        for (size_t i = 0; i + 1 < f.grid().size(); ++i) {
            Interval pd = f.piece_domain(i);
            if (!pd.intersects(window)) continue;
            Interval pw = pd.intersect(window);
            Rat m = f.slope(i);
            // f(z) - z = (f(pd.lo) - m*pd.lo) + (m-1) z
            Rat c0 = f.eval(pd.lo) - m * pd.lo, c1 = m - 1;
            if (auto z = positive_sample(rat_max(pw.lo, a), pw.hi, c0, c1)) {
                Interval U(a, *z);
                if (window.contains(U) && f.image_of(U).contains(U)) return U;
            }
            if (auto z = positive_sample(pw.lo, rat_min(pw.hi, a), -c0, -c1)) {
                Interval U(*z, a);
                if (window.contains(U) && f.image_of(U).contains(U)) return U;
            }
        }
        // Fallback per Lemma 8.2's proof: y near a with f^2(y) > y (or < y);
        // take the hull of {a, y, f(y)}.
        PLMap g2 = f.power(2);
        for (size_t i = 0; i + 1 < g2.grid().size(); ++i) {
            Interval pd = g2.piece_domain(i);
            if (!pd.intersects(window)) continue;
            Interval pw = pd.intersect(window);
            if (pw.degenerate()) continue;
            Rat m = g2.slope(i);
            Rat c0 = g2.eval(pd.lo) - m * pd.lo, c1 = m - 1;
            for (bool pos : {true, false}) {
                auto y = pos ? positive_sample(pw.lo, pw.hi, c0, c1)
                             : positive_sample(pw.lo, pw.hi, -c0, -c1);
                if (!y) continue;
                Interval U(rat_min(a, rat_min(*y, f.eval(*y))),
                           rat_max(a, rat_max(*y, f.eval(*y))));
                if (!U.degenerate() && window.contains(U) && f.image_of(U).contains(U))
                    return U;
            }
        }
        return std::nullopt;
    };

    std::optional<Rat> chosen_a;
    std::optional<Interval> chosen_U;
    for (const auto& a : fixed_pts) {
        auto U = try_expanding(a);
        if (U) { chosen_a = a; chosen_U = U; break; }
    }
    if (!chosen_a)
        throw std::logic_error("mixing_structures: no expanding interval found (transitivity violated?)");

    auto p2 = periodic_points(f, 2);
    std::optional<Rat> y2;
    for (const auto& p : p2.points) {
        if (p.minimal_period != 2 || p.x <= 0 || p.x >= 1) continue;
        if (!y2) y2 = p.x;
        if (rat_abs(p.x - *chosen_a) < eta) { y2 = p.x; break; }
    }
    if (!y2)
        throw std::logic_error("mixing_structures: no period-2 point (transitivity violated?)");

    MixingStructures out{*chosen_a, *y2, *chosen_U, {}};
    Interval cur = *chosen_U;
    for (int i = 0; i < ladder_len; ++i) {
        out.ladder.push_back(cur);
        Interval next = f.image_of(cur);
        if (!next.contains(cur))
            throw std::logic_error("mixing_structures: ladder is not nested");
        cur = next;
    }
    return out;
}

// --- A(f) boundary analysis (Lemma 8.5 / 8.6) ---

// Single-step reading: endpoints of [0,1] with no f-preimage in (0,1).
inline std::vector<Rat> endpoint_A_set(const PLMap& f) {
    std::vector<Rat> A;
    for (const Rat& e : {Rat(0), Rat(1)}) {
        bool interior = false;
        for (const auto& comp : f.preimages(e).components())
            if (comp.hi > 0 && comp.lo < 1 && !(comp.degenerate() && (comp.lo == 0 || comp.lo == 1)))
                interior = true;
        if (!interior) A.push_back(e);
    }
    return A;
}

// Iterated reading: no point of ∪_{n>=1} f^{-n}(e) lies in (0,1). Decidable
// because the accumulating preimage set either leaves {0,1} (then e is out)
// or stabilizes inside {0,1}.
inline std::vector<Rat> iterated_A_set(const PLMap& f) {
    std::vector<Rat> A;
    for (const Rat& e : {Rat(0), Rat(1)}) {
        std::set<Rat> S{e};
        bool interior = false;
        for (int step = 0; step < 4 && !interior; ++step) {
            std::set<Rat> next = S;
            for (const auto& t : S)
                for (const auto& comp : f.preimages(t).components()) {
                    if (comp.hi > 0 && comp.lo < 1 &&
                        !(comp.degenerate() && (comp.lo == 0 || comp.lo == 1))) {
                        interior = true;
                        break;
                    }
                    next.insert(comp.lo);
                    if (!comp.degenerate()) next.insert(comp.hi);
                }
            if (next == S) break;
            S = next;
        }
        if (!interior) A.push_back(e);
    }
    return A;
}

// Lemma 8.5's five possibilities for A (single-step reading).
inline int classify_A_case(const PLMap& f, const std::vector<Rat>& A) {
    if (A.empty()) return 1;
    if (A.size() == 1 && A[0] == 0 && f.eval(Rat(0)) == 0) return 2;
    if (A.size() == 1 && A[0] == 1 && f.eval(Rat(1)) == 1) return 3;
    if (A.size() == 2 && f.eval(Rat(0)) == 0 && f.eval(Rat(1)) == 1) return 4;
    if (A.size() == 2 && f.eval(Rat(0)) == 1 && f.eval(Rat(1)) == 0) return 5;
    return 0;  // not one of Lemma 8.5's shapes (map cannot be mixing)
}

struct ASetResult {
    int case_tag = 1;
    std::vector<Rat> A;
    // For a fixed a ∈ A: the fixed points nearest to a (finitely many exist
    // for a PL map; Lemma 8.6's infinite sequence is a non-PL phenomenon).
    std::vector<Rat> fixed_points_near;
};

inline ASetResult boundary_A_set(const MarkovSystem& ms, int seq_len = 8) {
    if (!std::holds_alternative<Mixing>(classify_transitivity(ms)))
        throw std::invalid_argument("boundary_A_set: system is not mixing");
    const PLMap& f = ms.map();
    ASetResult out;
    out.A = endpoint_A_set(f);
    out.case_tag = classify_A_case(f, out.A);
    if (out.case_tag == 0)
        throw std::logic_error("boundary_A_set: A-structure outside Lemma 8.5 (mixing violated?)");
    for (const auto& a : out.A) {
        if (f.eval(a) != a) continue;
        auto pp = periodic_points(f, 1);
        std::vector<Rat> others;
        for (const auto& p : pp.points)
            if (p.x != a) others.push_back(p.x);
        for (const auto& c : pp.continua) {
            others.push_back(c.range.lo);
            others.push_back(c.range.hi);
        }
        std::sort(others.begin(), others.end(), [&](const Rat& u, const Rat& v) {
            return rat_abs(u - a) < rat_abs(v - a);
        });
        if (static_cast<long>(others.size()) > seq_len) others.resize(seq_len);
        out.fixed_points_near = others;
    }
    return out;
}

}  // namespace intervaldyn
