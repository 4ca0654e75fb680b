#pragma once

#include "prolongation.hpp"

namespace intervaldyn {

// --- solenoidal towers (Section 3) ---

struct SolenoidTower {
    PLMap map;
    // levels[j] is a cycle of intervals of period 2^(j+1); orbits are nested
    // and periods strictly divide each other.
    std::vector<CycleOfIntervals> levels;
    int depth = 0;
};

// Doubling substitution: D(g) maps [0,1/3] by x+2/3, interpolates across the
// middle, and carries a 1/3-scaled copy of g on [2/3,1], so f^2 on [2/3,1]
// is conjugate to g.
inline PLMap doubling_substitution(const PLMap& g) {
    std::vector<Rat> xs{Rat(0), Rat(1, 3)};
    std::vector<Rat> ys{Rat(2, 3), Rat(1)};
    Rat third(1, 3), two_thirds(2, 3);
    for (size_t i = 0; i < g.grid().size(); ++i) {
        xs.push_back(two_thirds + g.grid()[i] * third);
        ys.push_back(g.values()[i] * third);
    }
    return PLMap(std::move(xs), std::move(ys));
}

// Verified cycle of intervals of period n with base I.
inline CycleOfIntervals orbit_cycle(const PLMap& f, Interval I, long n) {
    CycleOfIntervals cyc;
    Interval K = I;
    for (long k = 0; k < n; ++k) {
        cyc.orbit.push_back(K);
        K = f.image_of(K);
    }
    if (K != I) throw std::logic_error("orbit_cycle: interval is not n-periodic");
    for (size_t a = 0; a < cyc.orbit.size(); ++a)
        for (size_t b = a + 1; b < cyc.orbit.size(); ++b) {
            Interval ia = cyc.orbit[a], ib = cyc.orbit[b];
            if (ia.intersects(ib) && !ia.intersect(ib).degenerate())
                throw std::logic_error("orbit_cycle: orbit members overlap");
        }
    cyc.weak = false;
    return cyc;
}

// Truncated period-doubling tower: D^depth applied to the swap s(x) = 1-x.
// Levels I_j = [1 - 3^-j, 1] of period 2^j for j = 1..depth+1 (the last level
// comes from the swap's own 2-periodic subinterval).
inline SolenoidTower build_doubling_tower(int depth) {
    if (depth < 1) throw std::invalid_argument("build_doubling_tower: depth >= 1");
    if (depth > 12) throw ResourceError("build_doubling_tower: depth too large");
    PLMap s({Rat(0), Rat(1)}, {Rat(1), Rat(0)});
    PLMap f = s;
    for (int d = 0; d < depth; ++d) f = doubling_substitution(f);
    SolenoidTower tower{f, {}, depth};
    Rat scale(1);
    long period = 1;
    for (int j = 1; j <= depth + 1; ++j) {
        scale /= 3;
        period *= 2;
        Interval I(Rat(1) - scale, Rat(1));
        tower.levels.push_back(orbit_cycle(f, I, period));
    }
    return tower;
}

// The same tower conjugated into [1/5, 4/5], with fixed connectors outside;
// keeps 0 and 1 away from the solenoidal structure.
inline SolenoidTower interior_tower(int depth) {
    SolenoidTower t = build_doubling_tower(depth);
    Rat a(1, 5), w(3, 5);
    auto h = [&](const Rat& x) { return a + w * x; };
    std::vector<Rat> xs{Rat(0)}, ys{Rat(0)};
    for (size_t i = 0; i < t.map.grid().size(); ++i) {
        xs.push_back(h(t.map.grid()[i]));
        ys.push_back(h(t.map.values()[i]));
    }
    xs.push_back(Rat(1));
    ys.push_back(Rat(1));
    SolenoidTower out{PLMap(std::move(xs), std::move(ys)), {}, depth};
    for (const auto& lvl : t.levels) {
        CycleOfIntervals c;
        c.weak = lvl.weak;
        for (const auto& I : lvl.orbit) c.orbit.push_back(Interval(h(I.lo), h(I.hi)));
        out.levels.push_back(std::move(c));
    }
    return out;
}

// --- odometer (adic) coordinates ---

struct OdometerAddress {
    std::vector<long> digits;  // r_i with 0 <= r_i < m_i, r_{i+1} = r_i mod m_i
};

inline void check_address(const OdometerAddress& addr, const std::vector<long>& moduli) {
    if (addr.digits.size() != moduli.size())
        throw std::invalid_argument("odometer: digit/modulus count mismatch");
    for (size_t i = 0; i < moduli.size(); ++i) {
        if (addr.digits[i] < 0 || addr.digits[i] >= moduli[i])
            throw std::invalid_argument("odometer: digit out of range");
        if (i + 1 < moduli.size() && (addr.digits[i + 1] - addr.digits[i]) % moduli[i] != 0)
            throw std::invalid_argument("odometer: inconsistent address");
    }
}

// Add-1-with-carry in inverse-limit coordinates.
inline OdometerAddress odometer_translate(const OdometerAddress& addr,
                                          const std::vector<long>& moduli) {
    check_address(addr, moduli);
    OdometerAddress out = addr;
    for (size_t i = 0; i < moduli.size(); ++i)
        out.digits[i] = (out.digits[i] + 1) % moduli[i];
    return out;
}

struct Outside {};
using PhiResult = std::variant<OdometerAddress, Outside>;

// phi(x): the digit vector r with x in f^{r_j}(I_j) per level.
inline PhiResult phi_address(const SolenoidTower& tower, const Rat& x) {
    OdometerAddress addr;
    for (const auto& lvl : tower.levels) {
        long r = -1;
        for (long k = 0; k < lvl.period(); ++k)
            if (lvl.orbit[k].contains(x)) { r = k; break; }
        if (r < 0) return Outside{};
        addr.digits.push_back(r);
    }
    std::vector<long> moduli;
    for (const auto& lvl : tower.levels) moduli.push_back(lvl.period());
    check_address(addr, moduli);
    return addr;
}

inline std::vector<long> tower_moduli(const SolenoidTower& t) {
    std::vector<long> m;
    for (const auto& lvl : t.levels) m.push_back(lvl.period());
    return m;
}

// --- per-point omega classification (Corollary 5.5) ---

struct OmegaClassification {
    int case_tag = 0;  // 1 cycle, 2 solenoidal, 3 transitive cycle, 4 basic-set; 0 undecided
    std::vector<Rat> cycle;       // case 1
    IntervalSet evidence;         // cases 2-4: the ambient invariant set
    std::vector<long> level_periods;  // case 2: nested cycle periods
    std::string note;
};

namespace detail {

// All invariant cell-cycle closures of a Markov system: reach-closures of
// nontrivial SCCs and of single cells, closed under unions with dividing
// periods (recovers intermediate tower levels).
struct InvariantCycle {
    IntervalSet set;
    long period = 1;
};

inline std::vector<InvariantCycle> invariant_cycles(const MarkovSystem& ms) {
    std::vector<IntervalSet> seeds;
    size_t n = ms.cell_count();
    for (size_t c = 0; c < n; ++c) {
        IntervalSet t = ms.hybrid_tail(ms.cell_node(c));
        if (!t.is_empty()) seeds.push_back(t);
    }
    // Dedupe; close under pairwise unions when the union is f-invariant.
    auto add_unique = [](std::vector<IntervalSet>& v, const IntervalSet& s) {
        for (const auto& t : v)
            if (t == s) return false;
        v.push_back(s);
        return true;
    };
    std::vector<IntervalSet> all;
    for (const auto& s : seeds) add_unique(all, s);
    for (int round = 0; round < 4; ++round) {
        bool grew = false;
        size_t sz = all.size();
        for (size_t i = 0; i < sz; ++i)
            for (size_t j = i + 1; j < sz; ++j) {
                IntervalSet u = all[i].unite(all[j]);
                if (ms.map().image_of(u) == u) grew |= add_unique(all, u);
            }
        if (!grew) break;
    }
    std::vector<InvariantCycle> out;
    for (const auto& s : all) {
        if (ms.map().image_of(s) != s) continue;
        // Period: the components must be permuted cyclically by f.
        long p = static_cast<long>(s.size());
        bool cyclic = true;
        std::vector<int> tgt(s.size(), -1);
        for (size_t i = 0; i < s.size(); ++i) {
            Interval img = ms.map().image_of(s.components()[i]);
            for (size_t j = 0; j < s.size(); ++j)
                if (s.components()[j].contains(img)) { tgt[i] = static_cast<int>(j); break; }
            if (tgt[i] < 0) { cyclic = false; break; }
        }
        if (cyclic) {
            // Single cycle check.
            std::vector<char> seen(s.size(), 0);
            size_t cur = 0, cnt = 0;
            while (cnt < s.size() && !seen[cur]) {
                seen[cur] = 1;
                ++cnt;
                cur = static_cast<size_t>(tgt[cur]);
            }
            if (cnt != s.size() || cur != 0) cyclic = false;
        }
        if (!cyclic) p = 1;  // treat as a period-1 invariant union
        out.push_back({s, cyclic ? p : 1});
    }
    std::sort(out.begin(), out.end(), [](const InvariantCycle& a, const InvariantCycle& b) {
        return a.set.measure() > b.set.measure();
    });
    return out;
}

}  // namespace detail

// Iterates x, then classifies omega(x) per Corollary 5.5 on the available
// evidence. Case 3 vs 4 are only ever reported with a Markov ambient.
inline OmegaClassification classify_omega(const PLMap& f, const Rat& x, int budget = 10000) {
    OmegaClassification out;
    // Exact eventual periodicity.
    {
        std::map<Rat, int> seen;
        Rat y = x;
        for (int k = 0; k <= budget; ++k) {
            auto it = seen.find(y);
            if (it != seen.end()) {
                out.case_tag = 1;
                Rat z = y;
                do {
                    out.cycle.push_back(z);
                    z = f.eval(z);
                } while (z != y);
                out.note = "orbit is eventually periodic (exact repeat)";
                return out;
            }
            seen[y] = k;
            y = f.eval(y);
            if (seen.size() > 4096) break;  // cap the exact-orbit memory
        }
    }
    // Certified monotone convergence to a periodic point (f or f^2 chains).
    {
        Rat y = f.eval_iter(x, 8);
        std::vector<Rat> tailpts;
        for (int k = 0; k < 6; ++k) {
            tailpts.push_back(y);
            y = f.eval(y);
        }
        for (long m : {1L, 2L}) {
            if (tailpts.size() < static_cast<size_t>(2 * m + 1)) continue;
            Interval Ja = Interval::point(tailpts[0]);
            Interval Jb = Interval::point(tailpts[m]);
            auto cert = detail::monotone_trap(f, m, Ja, Jb);
            if (cert) {
                out.case_tag = 1;
                out.cycle.push_back(cert->limit);
                if (m == 2) {
                    auto cert2 = detail::monotone_trap(f, m, Interval::point(tailpts[1]),
                                                       Interval::point(tailpts[1 + m]));
                    if (cert2) out.cycle.push_back(cert2->limit);
                }
                out.note = "monotone convergence certificate";
                return out;
            }
        }
    }
    // Markov ambient: locate the minimal invariant cycle holding the orbit
    // tail and classify it.
    auto mk = markovize(f);
    if (auto* ms = std::get_if<MarkovSystem>(&mk)) {
        std::vector<Rat> tail;
        Rat y = f.eval_iter(x, std::min(budget, 64));
        for (int k = 0; k < 32; ++k) {
            tail.push_back(y);
            y = f.eval(y);
        }
        auto cycles = detail::invariant_cycles(*ms);
        const detail::InvariantCycle* best = nullptr;
        for (const auto& c : cycles) {
            bool holds = true;
            for (const auto& t : tail)
                if (!c.set.contains(t)) { holds = false; break; }
            if (!holds) continue;
            if (!best || c.set.measure() < best->set.measure()) best = &c;
        }
        if (best) {
            // Nested chain above the best cycle with dividing periods.
            std::vector<const detail::InvariantCycle*> chain;
            for (const auto& c : cycles)
                if (c.set.contains(best->set) && c.period <= best->period &&
                    best->period % c.period == 0)
                    chain.push_back(&c);
            std::set<long> chain_periods;
            for (auto* c : chain) chain_periods.insert(c->period);
            if (chain_periods.size() >= 3 && best->period >= 4) {
                out.case_tag = 2;
                out.evidence = best->set;
                out.level_periods.assign(chain_periods.begin(), chain_periods.end());
                out.note = "orbit trapped in nested period-multiplying cycles";
                return out;
            }
            // Transitive restriction?
            IntervalSet Mset = best->set;
            Interval comp0 = Mset.components().front();
            try {
                PLMap g = f;
                long per = best->period;
                if (Mset.size() == 1 && comp0 == Interval(Rat(0), Rat(1))) {
                    // ambient is everything
                } else {
                    PLMap fp = f.power(per);
                    g = restrict_rescale(fp, comp0);
                }
                auto sub = markovize(g);
                if (auto* subms = std::get_if<MarkovSystem>(&sub)) {
                    if (is_transitive(classify_transitivity(*subms))) {
                        out.case_tag = 3;
                        out.evidence = Mset;
                        out.note = "orbit dense-type in a transitive cycle of intervals";
                        return out;
                    }
                    // Basic-set containment (case 4): the cycle carries a
                    // basic set with genuine gaps and the tail stays inside.
                    auto cyc = orbit_cycle(f, comp0, best->period);
                    auto b = basic_set(*ms, cyc, 3);
                    bool inside = true;
                    for (const auto& t : tail)
                        if (!b.outer.contains(t)) { inside = false; break; }
                    if (inside && !b.gaps.empty()) {
                        out.case_tag = 4;
                        out.evidence = b.outer;
                        out.note = "orbit inside a basic-set outer approximation";
                        return out;
                    }
                }
            } catch (const std::exception&) {
                // fall through to undecided
            }
        }
    }
    out.case_tag = 0;
    out.note = "budget exhausted without a certificate";
    return out;
}

// --- omega(f) vs Omega(f) at cell level (Theorem 7.5) ---

struct OmegaOmegaReport {
    IntervalSet Per_closure;  // cells containing periodic points (approx)
    IntervalSet omega_f;      // SCC cells plus partition point cycles
    IntervalSet Omega_f;      // cells whose exact image tail still touches them
    IntervalSet chain_limit;  // stabilized running intersection of f^n(Omega)
    bool thm75_holds = false;
    int steps_to_stabilize = 0;
    std::vector<Rat> gap_witnesses;  // touch points of Omega-flagged cells not in omega
};

namespace detail {

// Exact image-set tail of a cell: iterate S -> f(S) (interval sets with
// partition endpoints, so the sequence is eventually periodic) and return
// the union over the limit cycle.
inline IntervalSet image_tail(const MarkovSystem& ms, const IntervalSet& start, int cap) {
    std::vector<IntervalSet> hist{start};
    for (int k = 0; k < cap; ++k) {
        IntervalSet next = ms.image(hist.back());
        for (size_t i = 0; i < hist.size(); ++i) {
            if (hist[i] == next) {
                IntervalSet tail = next;
                for (size_t j = i + 1; j < hist.size(); ++j) tail = tail.unite(hist[j]);
                return tail;
            }
        }
        hist.push_back(next);
    }
    throw ResourceError("image_tail: state cap exceeded");
}

}  // namespace detail

inline OmegaOmegaReport omega_vs_Omega(const MarkovSystem& ms, int period_bound = 8) {
    OmegaOmegaReport rep;
    size_t n = ms.cell_count();
    int cap = static_cast<int>(4 * n * n + 64);

    // omega: nontrivial SCC cells + partition point cycles.
    auto ids = ms.scc_ids();
    std::vector<char> nontrivial_comp;
    {
        int m = 0;
        for (size_t i = 0; i < n; ++i) m = std::max(m, ids[i] + 1);
        nontrivial_comp.assign(m, 0);
        std::vector<int> sz(m, 0);
        for (size_t i = 0; i < n; ++i) sz[ids[i]]++;
        for (size_t i = 0; i < n; ++i) {
            if (sz[ids[i]] > 1) nontrivial_comp[ids[i]] = 1;
            else if (ms.covers(i, i)) nontrivial_comp[ids[i]] = 1;
        }
    }
    std::vector<Interval> omega_comps;
    for (size_t i = 0; i < n; ++i)
        if (nontrivial_comp[ids[i]]) omega_comps.push_back(ms.cell(i));
    for (const auto& p : ms.points()) {
        Rat y = p;
        for (size_t k = 0; k <= ms.points().size(); ++k) {
            y = ms.map().eval(y);
            if (y == p) { omega_comps.push_back(Interval::point(p)); break; }
        }
    }
    rep.omega_f = IntervalSet(omega_comps);

    // Omega: exact image tail touches the cell.
    std::vector<Interval> flagged;
    for (size_t i = 0; i < n; ++i) {
        IntervalSet tail = detail::image_tail(ms, IntervalSet(ms.cell(i)), cap);
        IntervalSet touch = tail.intersect(IntervalSet(ms.cell(i)));
        if (!touch.is_empty()) {
            flagged.push_back(ms.cell(i));
            if (!rep.omega_f.contains(IntervalSet(ms.cell(i))))
                for (const auto& t : touch.components())
                    rep.gap_witnesses.push_back(t.lo);
        }
    }
    rep.Omega_f = IntervalSet(flagged);

    // Per closure: cells containing periodic points up to period_bound.
    {
        PowerCache pc(ms.map());
        std::vector<Interval> per;
        for (long k = 1; k <= period_bound; ++k) {
            auto pp = periodic_points(ms.map(), k, &pc);
            for (const auto& p : pp.points) per.push_back(Interval::point(p.x));
            for (const auto& c : pp.continua) per.push_back(c.range);
        }
        IntervalSet pts(per);
        std::vector<Interval> cells;
        for (size_t i = 0; i < n; ++i)
            if (!pts.intersect(IntervalSet(ms.cell(i))).is_empty()) cells.push_back(ms.cell(i));
        rep.Per_closure = IntervalSet(cells);
    }

    // Theorem 7.5 chain: running intersection of f^n(Omega).
    IntervalSet S = rep.Omega_f;
    IntervalSet T = rep.Omega_f;
    std::vector<IntervalSet> seen{S};
    for (int k = 1; k <= cap; ++k) {
        S = ms.image(S);
        IntervalSet T2 = T.intersect(S);
        bool repeat = false;
        for (const auto& old : seen)
            if (old == S) { repeat = true; break; }
        if (T2 == T && repeat) {
            rep.steps_to_stabilize = k;
            break;
        }
        T = T2;
        seen.push_back(S);
        rep.steps_to_stabilize = k;
    }
    rep.chain_limit = T;
    rep.thm75_holds = (T == rep.omega_f);
    return rep;
}

// --- o-extrema (Section 7) ---

struct OExtremum {
    Interval span;   // degenerate for genuine turning points
    bool is_max = false;
    bool plateau = false;
};

inline std::vector<OExtremum> o_extrema(const PLMap& f) {
    std::vector<OExtremum> out;
    const auto& xs = f.grid();
    const auto& ys = f.values();
    size_t n = xs.size();
    size_t i = 1;
    while (i + 1 <= n - 1) {
        if (ys[i] == ys[i - 1]) { ++i; continue; }
        // plateau run starting at i?
        size_t j = i;
        while (j + 1 < n && ys[j + 1] == ys[j]) ++j;
        if (j > i) {
            // plateau [xs[i], xs[j]] interior; edges must be extrema of the
            // same kind with non-degenerate flanks.
            if (j < n - 1) {
                Rat left = ys[i - 1], right = ys[j + 1];
                bool lmax = left < ys[i], rmax = right < ys[j];
                if (lmax == rmax)
                    out.push_back({Interval(xs[i], xs[j]), lmax, true});
            }
            i = j;
            continue;
        }
        // genuine turning knot at xs[i]?
        Rat dl = ys[i] - ys[i - 1], dr = ys[i + 1] - ys[i];
        if (dl > 0 && dr < 0) out.push_back({Interval::point(xs[i]), true, false});
        if (dl < 0 && dr > 0) out.push_back({Interval::point(xs[i]), false, false});
        ++i;
    }
    return out;
}

// --- wandering interval probe (Lemma 6.1) ---

struct WanderingReport {
    std::vector<Interval> z_evidence;           // trapped to a periodic orbit
    std::vector<Interval> wandering_candidates; // disjoint iterates through budget
};

inline WanderingReport wandering_check(const PLMap& f, int grid, int budget) {
    if (grid < 1) throw std::invalid_argument("wandering_check: grid >= 1");
    WanderingReport rep;
    for (int k = 0; k < grid; ++k) {
        Interval J(Rat(k, grid), Rat(k + 1, grid));
        auto r = weakly_periodic_closure(f, J, budget);
        if (std::holds_alternative<Disjoint>(r)) {
            rep.z_evidence.push_back(J);
            continue;
        }
        if (std::holds_alternative<CycleOfIntervals>(r)) continue;
        // Undecided: count as a wandering candidate when the computed
        // iterates were pairwise disjoint.
        Interval cur = J;
        bool disjoint = true;
        std::vector<Interval> seenJ{J};
        for (int t = 0; t < budget && disjoint; ++t) {
            cur = f.image_of(cur);
            for (const auto& old : seenJ)
                if (cur.intersects(old)) { disjoint = false; break; }
            seenJ.push_back(cur);
        }
        if (disjoint) rep.wandering_candidates.push_back(J);
    }
    return rep;
}

// --- assembled spectral decomposition (Section 5) ---

struct GenusZeroEntry {
    std::vector<Rat> orbit;
    bool continuum = false;
    Interval range;         // for continua
    std::string stability;  // attracting / repelling / neutral / one-sided / continuum
};

struct SolenoidEvidence {
    std::vector<long> periods;
    IntervalSet deepest;
};

struct DecompositionReport {
    std::vector<BasicSetApprox> basic_sets;
    std::vector<SolenoidEvidence> solenoids;
    std::vector<GenusZeroEntry> genus0;
    std::vector<std::pair<Rat, OmegaClassification>> per_point;
    bool lemma51_ok = true;  // pairwise basic-set intersections are finite
};

inline DecompositionReport spectral_decomposition(const MarkovSystem& ms, int depth,
                                                  int period_bound = 8) {
    DecompositionReport rep;
    auto cycles = detail::invariant_cycles(ms);

    // Solenoid evidence: maximal chains with strictly multiplying periods.
    {
        std::vector<const detail::InvariantCycle*> nontriv;
        for (const auto& c : cycles)
            if (c.period >= 2) nontriv.push_back(&c);
        for (auto* deep : nontriv) {
            std::set<long> chain{deep->period};
            for (auto* c : nontriv)
                if (c->set.contains(deep->set) && deep->period % c->period == 0 &&
                    c->period < deep->period)
                    chain.insert(c->period);
            if (chain.size() >= 2) {
                bool maximal = true;
                for (auto* c : nontriv)
                    if (c != deep && c->set.measure() < deep->set.measure() &&
                        deep->set.contains(c->set) && c->period % deep->period == 0 &&
                        c->period > deep->period)
                        maximal = false;
                if (maximal)
                    rep.solenoids.push_back({{chain.begin(), chain.end()}, deep->set});
            }
        }
        // Keep only the deepest chains (dedupe by deepest set).
        std::sort(rep.solenoids.begin(), rep.solenoids.end(),
                  [](const SolenoidEvidence& a, const SolenoidEvidence& b) {
                      return a.periods.size() > b.periods.size();
                  });
        if (rep.solenoids.size() > 1) rep.solenoids.resize(1);
    }

    // Basic sets per invariant cycle (genuine cycles only).
    for (const auto& c : cycles) {
        bool genuine_cycle = true;
        try {
            Interval base = c.set.components().front();
            auto cyc = orbit_cycle(ms.map(), base, c.period);
            if (cyc.as_set() != c.set) genuine_cycle = false;
            if (genuine_cycle) {
                auto e = E_set(ms, cyc, std::min(depth, 4));
                if (e.kind == ESetResult::Infinite && e.basic)
                    rep.basic_sets.push_back(*e.basic);
            }
        } catch (const std::exception&) {
            continue;
        }
    }
    // Dedupe basic sets by outer set.
    {
        std::vector<BasicSetApprox> uniq;
        for (auto& b : rep.basic_sets) {
            bool dup = false;
            for (const auto& u : uniq)
                if (u.outer == b.outer) dup = true;
            if (!dup) uniq.push_back(std::move(b));
        }
        rep.basic_sets = std::move(uniq);
    }

    // Genus-0 bucket: periodic orbits outside every basic set and solenoid.
    {
        PowerCache pc(ms.map());
        std::set<Rat> used;
        for (long k = 1; k <= period_bound; ++k) {
            auto pp = periodic_points(ms.map(), k, &pc);
            for (const auto& p : pp.points) {
                if (p.minimal_period != k || used.count(p.x)) continue;
                bool inside = false;
                for (const auto& b : rep.basic_sets)
                    if (b.outer.contains(p.x)) inside = true;
                for (const auto& s : rep.solenoids)
                    if (s.deepest.contains(p.x)) inside = true;
                if (inside) continue;
                GenusZeroEntry e;
                Rat z = p.x;
                Rat sl = 1;
                for (long t = 0; t < k; ++t) {
                    e.orbit.push_back(z);
                    used.insert(z);
                    auto s = one_sided_slope(ms.map(), z, z < 1 ? Side::R : Side::L);
                    sl *= s ? rat_abs(*s) : Rat(0);
                    z = ms.map().eval(z);
                }
                e.stability = sl < 1 ? "attracting" : (sl == 1 ? "neutral" : "repelling");
                rep.genus0.push_back(std::move(e));
            }
            for (const auto& c : pp.continua) {
                if (c.minimal_period != k) continue;
                GenusZeroEntry e;
                e.continuum = true;
                e.range = c.range;
                e.stability = "continuum";
                rep.genus0.push_back(std::move(e));
            }
        }
    }

    // Lemma 5.1: pairwise basic-set intersections are finite point sets.
    for (size_t i = 0; i < rep.basic_sets.size(); ++i)
        for (size_t j = i + 1; j < rep.basic_sets.size(); ++j)
            if (!rep.basic_sets[i].outer.intersect(rep.basic_sets[j].outer).all_degenerate())
                rep.lemma51_ok = false;

    // Point classification samples: partition midpoints and points.
    {
        std::set<Rat> samples;
        for (size_t i = 0; i < ms.cell_count() && samples.size() < 12; ++i)
            samples.insert(ms.cell(i).midpoint());
        for (const auto& p : ms.points())
            if (samples.size() < 16) samples.insert(p);
        for (const auto& s : samples)
            rep.per_point.emplace_back(s, classify_omega(ms.map(), s, 2000));
    }
    return rep;
}

}  // namespace intervaldyn
