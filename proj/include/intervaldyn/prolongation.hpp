#pragma once

#include "basicset.hpp"

namespace intervaldyn {

enum class ProlongationKind { ZeroDim, PeriodicOrbit, Solenoidal, CycleKind };

inline std::string prolongation_kind_str(ProlongationKind k) {
    switch (k) {
        case ProlongationKind::ZeroDim: return "zero_dim";
        case ProlongationKind::PeriodicOrbit: return "periodic_orbit";
        case ProlongationKind::Solenoidal: return "solenoidal";
        case ProlongationKind::CycleKind: return "cycle_of_intervals";
    }
    return "?";
}

// Outcome of the shrinking-neighborhood computation of P^T_M(x): the
// classification of Lemma 2.2 on finite evidence. `exact` is set on the
// Markov graph route (partition points) and on certified tails.
struct ProlongationResult {
    ProlongationKind kind = ProlongationKind::CycleKind;
    IntervalSet set;  // outer approximation of the prolongation set
    int depth = 0;
    bool exact = false;
    bool undecided = false;
    bool disjoint_certified = false;  // some W had provably disjoint iterates
    std::vector<Rat> orbit;           // PeriodicOrbit: the orbit points
    std::vector<long> level_counts;   // Solenoidal: component counts per level
};

namespace detail {

struct TailObservation {
    IntervalSet tail;
    bool exact = false;
    bool undecided = false;
    bool disjoint = false;
};

// Tail of closure(orb W) for a concrete interval W, via the Lemma 2.1
// machinery: a cycle of intervals, a certified collapse/trap onto a periodic
// orbit, or Undecided.
inline TailObservation interval_tail(const PLMap& f, const Interval& W, int budget) {
    auto r = weakly_periodic_closure(f, W, budget);
    if (auto* cyc = std::get_if<CycleOfIntervals>(&r))
        return {cyc->as_set(), !cyc->weak, false, false};
    if (auto* dis = std::get_if<Disjoint>(&r))
        return {dis->omega, true, false, true};
    return {std::get<Undecided>(r).enclosure, false, true, false};
}

}  // namespace detail

// P^T_M(x): intersection over a shrinking family of one-sided neighborhoods
// of the tails of their orbit closures. For Markov systems and partition
// points the computation is exact graph reachability on refinements; the
// general route iterates halving one-sided intervals with budgets.
inline ProlongationResult prolongation_set(const PLMap& f, const IntervalSet& ambient,
                                           const Rat& x, std::optional<Side> side, int depth,
                                           int budget = 10000) {
    if (!ambient.contains(x))
        throw std::domain_error("prolongation_set: point outside the ambient set");

    if (!side) {
        // P = P^L ∪ P^R (Property P1); missing sides contribute nothing.
        Interval comp = ambient.components().front();
        for (const auto& c : ambient.components())
            if (c.contains(x)) { comp = c; break; }
        std::optional<ProlongationResult> left, right;
        if (x > comp.lo) left = prolongation_set(f, ambient, x, Side::L, depth, budget);
        if (x < comp.hi) right = prolongation_set(f, ambient, x, Side::R, depth, budget);
        if (!left) return *right;
        if (!right) return *left;
        ProlongationResult out = *left;
        out.set = left->set.unite(right->set);
        out.exact = left->exact && right->exact;
        out.undecided = left->undecided || right->undecided;
        out.disjoint_certified = left->disjoint_certified && right->disjoint_certified;
        if (right->kind == ProlongationKind::CycleKind) out.kind = right->kind;
        std::set<Rat> orb(out.orbit.begin(), out.orbit.end());
        orb.insert(right->orbit.begin(), right->orbit.end());
        out.orbit.assign(orb.begin(), orb.end());
        return out;
    }

    Interval comp = ambient.components().front();
    for (const auto& c : ambient.components())
        if (c.contains(x)) { comp = c; break; }
    if (side == Side::L && x == comp.lo)
        throw std::domain_error("prolongation_set: left side missing at component start");
    if (side == Side::R && x == comp.hi)
        throw std::domain_error("prolongation_set: right side missing at component end");

    std::vector<detail::TailObservation> obs;

    // Markov graph route while the refined one-sided cell keeps shrinking.
    auto mk = markovize(f);
    int graph_levels = 0;
    if (auto* ms0 = std::get_if<MarkovSystem>(&mk)) {
        if (ms0->point_index(x) >= 0) {
            MarkovSystem sys = *ms0;
            std::optional<Rat> prev_len;
            for (int m = 0; m <= depth; ++m) {
                int pi = sys.point_index(x);
                if (pi < 0) break;
                size_t cell_idx = (side == Side::L) ? static_cast<size_t>(pi - 1)
                                                    : static_cast<size_t>(pi);
                if (side == Side::L && pi == 0) break;
                if (side == Side::R && static_cast<size_t>(pi) >= sys.cell_count()) break;
                Interval cell = sys.cell(cell_idx);
                if (!comp.contains(cell)) {
                    // One-sided neighborhoods must stay inside the ambient
                    // component; a cell poking out means x sits at an
                    // ambient boundary finer than the partition. Fall back.
                    break;
                }
                if (prev_len && cell.length() == *prev_len) break;  // refinement stalled
                prev_len = cell.length();
                obs.push_back({sys.hybrid_tail(sys.cell_node(cell_idx)), true, false, false});
                ++graph_levels;
                if (m < depth) sys = sys.refine();
            }
        }
    }

    // General route: halving one-sided intervals.
    if (static_cast<int>(obs.size()) <= depth) {
        Rat w0 = (side == Side::L) ? x - comp.lo : comp.hi - x;
        for (Rat scale(1, 2); static_cast<int>(obs.size()) <= depth; scale /= 2) {
            Rat w = w0 * scale;
            Interval W = (side == Side::L) ? Interval(x - w, x) : Interval(x, x + w);
            obs.push_back(detail::interval_tail(f, W, budget));
            if (obs.size() > static_cast<size_t>(depth) + 1) break;
        }
    }

    ProlongationResult out;
    out.depth = depth;
    for (const auto& o : obs) {
        out.undecided = out.undecided || o.undecided;
        out.disjoint_certified = out.disjoint_certified || o.disjoint;
    }
    out.set = obs.back().tail;
    out.exact = obs.back().exact;
    for (const auto& o : obs) out.level_counts.push_back(static_cast<long>(o.tail.size()));

    const auto& last = obs.back();
    bool stabilized = obs.size() >= 2 && obs[obs.size() - 2].tail == last.tail &&
                      !last.undecided && !obs[obs.size() - 2].undecided;
    if (obs.size() == 1) stabilized = !last.undecided && last.exact;

    if (stabilized) {
        if (last.tail.all_degenerate()) {
            out.kind = ProlongationKind::PeriodicOrbit;
            for (const auto& c : last.tail.components()) out.orbit.push_back(c.lo);
        } else {
            out.kind = ProlongationKind::CycleKind;
        }
        return out;
    }

    // Component counts doubling across >= 3 consecutive levels: solenoidal
    // evidence (finite-depth verdict, not a proof).
    {
        int doublings = 0;
        for (size_t i = 1; i < obs.size(); ++i) {
            if (obs[i].tail.size() >= 2 * obs[i - 1].tail.size() && obs[i - 1].tail.size() >= 1)
                ++doublings;
            else
                doublings = 0;
        }
        if (doublings >= 3) {
            out.kind = ProlongationKind::Solenoidal;
            return out;
        }
    }

    // Shrinking tails: the intersection degenerates onto a periodic orbit
    // (Lemma 2.2 cases 1-2). Identify the orbit when x itself is periodic.
    if (obs.size() >= 2) {
        const auto& a = obs[obs.size() - 2];
        if (last.tail.measure() < a.tail.measure() || last.tail.all_degenerate()) {
            if (last.tail.all_degenerate()) {
                out.kind = ProlongationKind::PeriodicOrbit;
                for (const auto& c : last.tail.components()) out.orbit.push_back(c.lo);
                out.exact = last.exact;
                return out;
            }
            // Try x's own orbit: if x is periodic every tail contains orb(x).
            Rat y = x;
            for (int k = 1; k <= 64; ++k) {
                y = f.eval(y);
                if (y == x) {
                    out.kind = ProlongationKind::PeriodicOrbit;
                    Rat z = x;
                    for (int t = 0; t < k; ++t) {
                        out.orbit.push_back(z);
                        z = f.eval(z);
                    }
                    out.exact = false;  // outer set still an interval enclosure
                    return out;
                }
            }
            out.kind = ProlongationKind::CycleKind;
            out.undecided = true;
            return out;
        }
    }

    out.kind = last.tail.all_degenerate() ? ProlongationKind::PeriodicOrbit
                                          : ProlongationKind::CycleKind;
    if (last.tail.all_degenerate())
        for (const auto& c : last.tail.components()) out.orbit.push_back(c.lo);
    return out;
}

// Sides T of x with P^T_M(x) = M, decided on exact verdicts only.
inline std::vector<Side> source_sides(const MarkovSystem& ms, const CycleOfIntervals& M,
                                      const Rat& x, int depth = 6, int budget = 10000) {
    IntervalSet Mset = M.as_set();
    std::vector<Side> out;
    Interval comp = Mset.components().front();
    for (const auto& c : Mset.components())
        if (c.contains(x)) { comp = c; break; }
    for (Side s : {Side::L, Side::R}) {
        if (s == Side::L && x == comp.lo) continue;
        if (s == Side::R && x == comp.hi) continue;
        auto r = prolongation_set(ms.map(), Mset, x, s, depth, budget);
        if (!r.undecided && r.set == Mset) out.push_back(s);
    }
    return out;
}

// --- E(M, f) = {x in M with a source side} (Section 4) ---

struct ESetResult {
    enum Kind { Infinite, FiniteCycle, Empty } kind = Empty;
    std::optional<BasicSetApprox> basic;  // kind == Infinite: E = B(M,f)
    std::vector<Rat> orbit;               // kind == FiniteCycle: E as an orbit
    int lemma45_case = 0;                 // 1..3 per Lemma 4.5, 0 if unrecognized
};

inline ESetResult E_set(const MarkovSystem& ms, const CycleOfIntervals& M, int depth = 5,
                        int budget = 10000) {
    IntervalSet Mset = M.as_set();
    // Sources among partition points (and ambient component endpoints).
    std::set<Rat> candidates;
    for (const auto& p : ms.points())
        if (Mset.contains(p)) candidates.insert(p);
    for (const auto& c : Mset.components()) {
        candidates.insert(c.lo);
        candidates.insert(c.hi);
    }
    std::vector<Rat> sources;
    for (const auto& p : candidates)
        if (!source_sides(ms, M, p, depth, budget).empty()) sources.push_back(p);

    // Kept-cell outer approximations across depths.
    std::vector<BasicSetApprox> levels;
    for (int d = 0; d <= depth; ++d) levels.push_back(basic_set(ms, M, d));
    const auto& last = levels.back();

    ESetResult out;
    bool valid = !last.kept_cells.empty() && last.refinement_shrank;
    bool counts_grow = depth >= 1 &&
                       last.outer.size() > levels[depth - 1].outer.size();
    bool measure_stable = depth >= 1 && last.outer == levels[depth - 1].outer;

    if (!valid) {
        if (sources.empty()) { out.kind = ESetResult::Empty; return out; }
        out.kind = ESetResult::FiniteCycle;
    } else if (measure_stable || counts_grow || sources.size() > 2 * Mset.size() + 2) {
        out.kind = ESetResult::Infinite;
        out.basic = last;
        return out;
    } else {
        bool shrinking = depth >= 2 &&
                         last.outer.measure() < levels[depth - 1].outer.measure() &&
                         levels[depth - 1].outer.measure() < levels[depth - 2].outer.measure();
        if (!shrinking || sources.empty()) {
            out.kind = sources.empty() && last.kept_cells.empty() ? ESetResult::Empty
                                                                  : ESetResult::Infinite;
            if (out.kind == ESetResult::Infinite) out.basic = last;
            if (out.kind == ESetResult::Infinite || sources.empty()) return out;
        }
        out.kind = ESetResult::FiniteCycle;
    }

    // Finite case: E should be a single cycle; tag per Lemma 4.5.
    out.orbit = sources;
    long s = M.period();
    long k = static_cast<long>(sources.size());
    const PLMap& f = ms.map();
    bool is_orbit = true;
    std::set<Rat> src_set(sources.begin(), sources.end());
    for (const auto& p : sources)
        if (!src_set.count(f.eval(p))) is_orbit = false;
    if (!is_orbit) return out;  // case 0: not recognized

    auto endpoint_of_M = [&](const Rat& p) {
        for (const auto& c : Mset.components())
            if (p == c.lo || p == c.hi) return true;
        return false;
    };
    if (k == s) {
        bool all_endpoints = true;
        for (const auto& p : sources)
            if (!endpoint_of_M(p)) all_endpoints = false;
        if (all_endpoints) {
            out.lemma45_case = 2;
            return out;
        }
        // Case 1: interior fixed structure with f^s swapping the two halves.
        for (const auto& p : sources) {
            for (const auto& c : Mset.components()) {
                if (!c.strictly_contains(p)) continue;
                Interval left(c.lo, p), right(p, c.hi);
                PLMap fs = f.power(s);
                if (fs.image_of(left) == right && fs.image_of(right) == left) {
                    out.lemma45_case = 1;
                    return out;
                }
            }
        }
        return out;
    }
    if (k == 2 * s) {
        for (const auto& p : sources)
            if (endpoint_of_M(p)) { out.lemma45_case = 3; return out; }
    }
    return out;
}

}  // namespace intervaldyn
