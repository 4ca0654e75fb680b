#pragma once

#include "orbit.hpp"

#include <numeric>
#include <variant>

namespace intervaldyn {

// A cycle of closed intervals: f(orbit[i]) ⊆ orbit[i+1 mod n]. When weak is
// false the members have pairwise disjoint interiors and f^n(base) = base.
struct CycleOfIntervals {
    std::vector<Interval> orbit;
    bool weak = false;

    long period() const { return static_cast<long>(orbit.size()); }
    const Interval& base() const { return orbit.front(); }
    IntervalSet as_set() const { return IntervalSet(orbit); }
};

// A PL map together with a finite forward-invariant partition containing all
// breakpoints; cell images are exactly unions of cells (or a single partition
// point for constant cells).
class MarkovSystem {
public:
    MarkovSystem(PLMap map, std::vector<Rat> points)
        : map_(std::move(map)), points_(std::move(points)) {
        build();
    }

    const PLMap& map() const { return map_; }
    const std::vector<Rat>& points() const { return points_; }
    size_t cell_count() const { return points_.size() - 1; }
    Interval cell(size_t i) const { return Interval(points_[i], points_[i + 1]); }
    bool covers(size_t i, size_t j) const { return cover_[i][j]; }
    const std::vector<std::vector<char>>& cover() const { return cover_; }

    // Index of the partition point equal to the (degenerate) image of cell i,
    // or -1 when the image is non-degenerate.
    int degenerate_image_point(size_t i) const { return degen_[i]; }

    int point_index(const Rat& x) const {
        auto it = std::lower_bound(points_.begin(), points_.end(), x);
        if (it == points_.end() || *it != x) return -1;
        return static_cast<int>(it - points_.begin());
    }

    // Cells whose closed interval is contained in s.
    std::vector<size_t> cells_within(const IntervalSet& s) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < cell_count(); ++i) {
            bool inside = false;
            for (const auto& c : s.components())
                if (c.contains(cell(i))) { inside = true; break; }
            if (inside) out.push_back(i);
        }
        return out;
    }

    IntervalSet cells_to_set(const std::vector<size_t>& cells) const {
        std::vector<Interval> comps;
        comps.reserve(cells.size());
        for (size_t c : cells) comps.push_back(cell(c));
        return IntervalSet(std::move(comps));
    }

    // Splits every cell at the preimages of partition points. Plateau
    // preimage components contribute their endpoints.
    MarkovSystem refine() const {
        std::vector<Rat> pts = points_;
        for (const auto& p : points_)
            for (const auto& comp : map_.preimages(p).components()) {
                pts.push_back(comp.lo);
                if (!comp.degenerate()) pts.push_back(comp.hi);
            }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return MarkovSystem(map_, std::move(pts));
    }

    Rat max_cell_length() const {
        Rat m = 0;
        for (size_t i = 0; i < cell_count(); ++i) m = rat_max(m, cell(i).length());
        return m;
    }

    // --- cover graph algorithms (cell-to-cell edges only) ---

    // Strongly connected components in reverse topological order of the
    // condensation; returns component id per cell.
    std::vector<int> scc_ids() const {
        size_t n = cell_count();
        std::vector<int> ids(n, -1), low(n, 0), num(n, -1);
        std::vector<char> on_stack(n, 0);
        std::vector<size_t> stk;
        int counter = 0, comp = 0;
        // Iterative Tarjan.
        struct Frame { size_t v; size_t next; };
        for (size_t root = 0; root < n; ++root) {
            if (num[root] != -1) continue;
            std::vector<Frame> call{{root, 0}};
            num[root] = low[root] = counter++;
            stk.push_back(root);
            on_stack[root] = 1;
            while (!call.empty()) {
                auto& [v, next] = call.back();
                bool descended = false;
                for (size_t j = next; j < n; ++j) {
                    if (!cover_[v][j]) continue;
                    call.back().next = j + 1;
                    if (num[j] == -1) {
                        num[j] = low[j] = counter++;
                        stk.push_back(j);
                        on_stack[j] = 1;
                        call.push_back({j, 0});
                        descended = true;
                        break;
                    }
                    if (on_stack[j]) low[v] = std::min(low[v], num[j]);
                }
                if (descended) continue;
                if (low[v] == num[v]) {
                    while (true) {
                        size_t w = stk.back();
                        stk.pop_back();
                        on_stack[w] = 0;
                        ids[w] = comp;
                        if (w == v) break;
                    }
                    ++comp;
                }
                size_t child = v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[child]);
            }
        }
        return ids;
    }

    // Cells reachable from `from` in >= 1 step.
    std::vector<char> reachable_from(size_t from) const {
        size_t n = cell_count();
        std::vector<char> vis(n, 0);
        std::vector<size_t> q;
        for (size_t j = 0; j < n; ++j)
            if (cover_[from][j] && !vis[j]) { vis[j] = 1; q.push_back(j); }
        while (!q.empty()) {
            size_t v = q.back();
            q.pop_back();
            for (size_t j = 0; j < n; ++j)
                if (cover_[v][j] && !vis[j]) { vis[j] = 1; q.push_back(j); }
        }
        return vis;
    }

    bool strongly_connected() const {
        size_t n = cell_count();
        auto ids = scc_ids();
        for (size_t i = 0; i < n; ++i)
            if (ids[i] != ids[0]) return false;
        // Single component must actually cycle (relevant for n == 1).
        auto r = reachable_from(0);
        return r[0];
    }

    bool is_cell_permutation() const {
        for (size_t i = 0; i < cell_count(); ++i) {
            int deg = 0;
            for (size_t j = 0; j < cell_count(); ++j) deg += cover_[i][j] ? 1 : 0;
            if (deg != 1) return false;
        }
        return true;
    }

    // gcd of cycle lengths of a strongly connected cover graph.
    long graph_period() const {
        size_t n = cell_count();
        std::vector<long> level(n, -1);
        std::vector<size_t> q{0};
        level[0] = 0;
        long g = 0;
        size_t head = 0;
        while (head < q.size()) {
            size_t v = q[head++];
            for (size_t j = 0; j < n; ++j) {
                if (!cover_[v][j]) continue;
                if (level[j] == -1) {
                    level[j] = level[v] + 1;
                    q.push_back(j);
                } else {
                    g = std::gcd(g, level[v] + 1 - level[j]);
                }
            }
        }
        return g == 0 ? 0 : std::labs(g);
    }

    // --- hybrid graph (cells + partition points) ---
    // Node k < cell_count(): cell k. Node cell_count()+i: partition point i.
    // Edges: cell -> covered cells, constant cell -> its image point,
    // point -> image point. Used for exact orbit-closure tails of cells.
    size_t hybrid_node_count() const { return cell_count() + points_.size(); }

    std::vector<std::vector<size_t>> hybrid_adjacency() const {
        size_t n = cell_count();
        std::vector<std::vector<size_t>> adj(hybrid_node_count());
        for (size_t i = 0; i < n; ++i) {
            if (degen_[i] >= 0) {
                adj[i].push_back(n + static_cast<size_t>(degen_[i]));
            } else {
                for (size_t j = 0; j < n; ++j)
                    if (cover_[i][j]) adj[i].push_back(j);
            }
        }
        for (size_t i = 0; i < points_.size(); ++i) {
            Rat y = map_.eval(points_[i]);
            int j = point_index(y);
            if (j < 0) throw std::logic_error("MarkovSystem: partition not forward invariant");
            adj[n + i].push_back(n + static_cast<size_t>(j));
        }
        return adj;
    }

    // Tail of the orbit closure of a node: everything reachable through some
    // cycle, i.e. ∩_n closure(∪_{i>=n} f^i(node)) at the cell/point level.
    IntervalSet hybrid_tail(size_t node) const {
        auto adj = hybrid_adjacency();
        size_t N = hybrid_node_count(), n = cell_count();
        // Reachability from node (>= 1 step).
        std::vector<char> reach(N, 0);
        std::vector<size_t> q;
        for (size_t j : adj[node]) if (!reach[j]) { reach[j] = 1; q.push_back(j); }
        while (!q.empty()) {
            size_t v = q.back(); q.pop_back();
            for (size_t j : adj[v]) if (!reach[j]) { reach[j] = 1; q.push_back(j); }
        }
        // Nodes on cycles within the reachable part (node itself included if
        // it reaches itself).
        std::vector<char> in_scope = reach;
        in_scope[node] = in_scope[node] || true;
        std::vector<char> on_cycle(N, 0);
        for (size_t v = 0; v < N; ++v) {
            if (!reach[v]) continue;
            // v on a cycle iff v reaches v.
            std::vector<char> vis(N, 0);
            std::vector<size_t> s;
            for (size_t j : adj[v]) if (!vis[j]) { vis[j] = 1; s.push_back(j); }
            while (!s.empty()) {
                size_t w = s.back(); s.pop_back();
                for (size_t j : adj[w]) if (!vis[j]) { vis[j] = 1; s.push_back(j); }
            }
            on_cycle[v] = vis[v];
        }
        // Tail = union of reach(cycle nodes reachable from node).
        std::vector<char> tail(N, 0);
        q.clear();
        for (size_t v = 0; v < N; ++v)
            if (reach[v] && on_cycle[v] && !tail[v]) { tail[v] = 1; q.push_back(v); }
        while (!q.empty()) {
            size_t v = q.back(); q.pop_back();
            for (size_t j : adj[v]) if (!tail[j]) { tail[j] = 1; q.push_back(j); }
        }
        std::vector<Interval> comps;
        for (size_t v = 0; v < N; ++v) {
            if (!tail[v]) continue;
            if (v < n) comps.push_back(cell(v));
            else comps.push_back(Interval::point(points_[v - n]));
        }
        return IntervalSet(std::move(comps));
    }

    size_t cell_node(size_t cell_idx) const { return cell_idx; }
    size_t point_node(size_t point_idx) const { return cell_count() + point_idx; }

    // Exact forward image of an interval set (componentwise image under f).
    IntervalSet image(const IntervalSet& s) const { return map_.image_of(s); }

private:
    void build() {
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
        if (points_.size() < 2 || points_.front() != 0 || points_.back() != 1)
            throw std::invalid_argument("MarkovSystem: partition must span [0,1]");
        for (const auto& b : map_.grid())
            if (point_index(b) < 0)
                throw std::invalid_argument("MarkovSystem: partition must contain all breakpoints");
        size_t n = points_.size() - 1;
        cover_.assign(n, std::vector<char>(n, 0));
        degen_.assign(n, -1);
        for (size_t i = 0; i < n; ++i) {
            Rat ya = map_.eval(points_[i]), yb = map_.eval(points_[i + 1]);
            if (point_index(ya) < 0 || point_index(yb) < 0)
                throw std::invalid_argument("MarkovSystem: partition not forward invariant");
            if (ya == yb) {
                degen_[i] = point_index(ya);
                continue;
            }
            Rat lo = rat_min(ya, yb), hi = rat_max(ya, yb);
            for (size_t j = 0; j < n; ++j)
                cover_[i][j] = (lo <= points_[j] && points_[j + 1] <= hi) ? 1 : 0;
        }
    }

    PLMap map_;
    std::vector<Rat> points_;
    std::vector<std::vector<char>> cover_;
    std::vector<int> degen_;
};

struct NotMarkov {
    size_t points_reached = 0;
};

using MarkovizeResult = std::variant<MarkovSystem, NotMarkov>;

// Stabilizes the forward orbit of the breakpoint set; a finite forward
// invariant set is exactly the Markov condition.
inline MarkovizeResult markovize(const PLMap& f, int max_steps = 64, size_t point_cap = 100000) {
    if (max_steps < 1) throw std::invalid_argument("markovize: max_steps >= 1");
    std::set<Rat> pts(f.grid().begin(), f.grid().end());
    for (int step = 0; step < max_steps; ++step) {
        std::vector<Rat> fresh;
        for (const auto& p : pts) {
            Rat q = f.eval(p);
            if (!pts.count(q)) fresh.push_back(q);
        }
        if (fresh.empty())
            return MarkovSystem(f, std::vector<Rat>(pts.begin(), pts.end()));
        pts.insert(fresh.begin(), fresh.end());
        if (pts.size() > point_cap) throw ResourceError("markovize: point cap exceeded");
    }
    return NotMarkov{pts.size()};
}

inline MarkovSystem markovize_or_throw(const PLMap& f, int max_steps = 64) {
    auto r = markovize(f, max_steps);
    if (auto* ms = std::get_if<MarkovSystem>(&r)) return *ms;
    throw std::invalid_argument("markovize: breakpoint orbit did not stabilize");
}

// --- transitivity / mixing classification (Lemma 8.3 dichotomy) ---

struct Mixing {};
struct TransitiveNotMixing { Rat swap_point; };
struct NotTransitive {};
using TransitivityClass = std::variant<Mixing, TransitiveNotMixing, NotTransitive>;

inline TransitivityClass classify_transitivity(const MarkovSystem& ms) {
    if (!ms.strongly_connected()) return NotTransitive{};
    if (ms.is_cell_permutation()) return NotTransitive{};
    long period = ms.graph_period();
    if (period == 1) return Mixing{};
    if (period == 2) {
        // The only transitive non-mixing shape: f swaps [0,a] and [a,1].
        // 2-color the cells and check the classes are contiguous halves.
        size_t n = ms.cell_count();
        std::vector<int> color(n, -1);
        color[0] = 0;
        std::vector<size_t> q{0};
        size_t head = 0;
        while (head < q.size()) {
            size_t v = q[head++];
            for (size_t j = 0; j < n; ++j)
                if (ms.covers(v, j) && color[j] == -1) {
                    color[j] = 1 - color[v];
                    q.push_back(j);
                }
        }
        size_t split = 0;
        while (split < n && color[split] == color[0]) ++split;
        for (size_t i = split; i < n; ++i)
            if (color[i] == color[0]) return NotTransitive{};
        Rat a = ms.points()[split];
        Interval left(Rat(0), a), right(a, Rat(1));
        if (ms.map().image_of(left) == right && ms.map().image_of(right) == left)
            return TransitiveNotMixing{a};
        return NotTransitive{};
    }
    // Period >= 3 cannot occur for a transitive interval map (Lemma 8.3).
    return NotTransitive{};
}

inline bool is_transitive(const TransitivityClass& c) {
    return !std::holds_alternative<NotTransitive>(c);
}

// Affine rescale of f restricted to an f-invariant interval J onto [0,1]:
// used to classify induced systems (e.g. f^2 on the swap halves).
inline PLMap restrict_rescale(const PLMap& f, const Interval& J) {
    if (J.degenerate()) throw std::invalid_argument("restrict_rescale: degenerate interval");
    if (!J.contains(f.image_of(J)))
        throw std::invalid_argument("restrict_rescale: interval is not forward invariant");
    Rat len = J.length();
    std::vector<Rat> xs{Rat(0)}, ys;
    ys.push_back((f.eval(J.lo) - J.lo) / len);
    for (size_t i = 0; i + 1 < f.grid().size(); ++i) {
        const Rat& x = f.grid()[i + 1];
        if (x > J.lo && x < J.hi) {
            xs.push_back((x - J.lo) / len);
            ys.push_back((f.values()[i + 1] - J.lo) / len);
        }
    }
    xs.push_back(Rat(1));
    ys.push_back((f.eval(J.hi) - J.lo) / len);
    return PLMap(std::move(xs), std::move(ys));
}

// --- orbit closures of intervals ---

struct Disjoint {
    IntervalSet omega;  // the periodic orbit the iterates converge to, when identified
};
struct Undecided {
    IntervalSet enclosure;
};
using ClosureResult = std::variant<CycleOfIntervals, Disjoint, Undecided>;

namespace detail {

struct TrapCert {
    Rat limit;           // the periodic point the chain converges to
    Interval open_zone;  // future iterates lie strictly inside this interval
};

// Monotone trapping certificate for g = f^m: Ja and its image Jb = g(Ja) are
// disjoint, g is strictly increasing and fixed-point free strictly between
// Ja and the nearest g-fixed point p beyond Jb. Then, by induction on
// monotonicity, all further iterates of Ja are pairwise disjoint and march
// monotonically into (boundary of Jb, p).
inline std::optional<TrapCert> monotone_trap(const PLMap& f, long m,
                                             const Interval& Ja, const Interval& Jb) {
    if (Ja.intersects(Jb)) return std::nullopt;
    bool rightward = Jb.lo > Ja.hi;
    PLMap g = f.power(m);
    auto pp = periodic_points(f, m);
    std::vector<Rat> fixies;
    for (const auto& q : pp.points) fixies.push_back(q.x);
    for (const auto& c : pp.continua) {
        fixies.push_back(c.range.lo);
        fixies.push_back(c.range.hi);
    }
    std::sort(fixies.begin(), fixies.end());
    std::optional<Rat> p;
    if (rightward) {
        for (const auto& q : fixies)
            if (q >= Jb.hi) { p = q; break; }
    } else {
        for (auto it = fixies.rbegin(); it != fixies.rend(); ++it)
            if (*it <= Jb.lo) { p = *it; break; }
    }
    if (!p) return std::nullopt;
    Interval H = rightward ? Interval(Ja.lo, *p) : Interval(*p, Ja.hi);
    size_t i0 = g.piece_containing(H.lo);
    for (size_t i = i0; i + 1 < g.grid().size() && g.grid()[i] < H.hi; ++i)
        if (g.slope(i) <= 0) return std::nullopt;
    for (const auto& q : fixies)
        if (H.strictly_contains(q)) return std::nullopt;
    Interval zone = rightward ? Interval(Jb.hi, *p) : Interval(*p, Jb.lo);
    return TrapCert{*p, zone};
}

}  // namespace detail

// Lemma 2.1 realization: the closure of orb U is either carried by a weakly
// periodic cycle of intervals (when some iterate meets an earlier one), or
// the iterates are certified pairwise disjoint, or the budget runs out.
inline ClosureResult weakly_periodic_closure(const PLMap& f, const Interval& U, int budget) {
    if (U.degenerate()) throw std::invalid_argument("weakly_periodic_closure: degenerate U");
    std::vector<Interval> J{U};
    std::optional<std::pair<size_t, size_t>> hit;
    std::vector<Rat> pt_cycle;
    for (int i = 1; i <= budget && !hit; ++i) {
        Interval next = f.image_of(J.back());
        if (next.degenerate()) {
            // Plateau collapse: the rest of the orbit is a point orbit.
            Rat x = next.lo;
            std::vector<Rat> seen{x};
            std::map<Rat, size_t> where{{x, 0}};
            size_t cyc_start = 0;
            for (int k = 0; k <= budget; ++k) {
                x = f.eval(x);
                auto it = where.find(x);
                if (it != where.end()) { cyc_start = it->second; break; }
                if (k == budget) return Undecided{IntervalSet(J)};
                where[x] = seen.size();
                seen.push_back(x);
            }
            for (size_t k = cyc_start; k < seen.size(); ++k) pt_cycle.push_back(seen[k]);
            // If a cycle point lands in an earlier interval we have a return.
            for (size_t l = 0; l < J.size() && !hit; ++l)
                for (const auto& c : pt_cycle)
                    if (J[l].contains(c)) { hit = {l, J.size()}; break; }
            if (!hit) {
                // Transient intervals pairwise disjoint?
                for (size_t a = 0; a < J.size(); ++a)
                    for (size_t b = a + 1; b < J.size(); ++b)
                        if (J[a].intersects(J[b])) hit = {a, b};
                if (!hit) {
                    IntervalSet om;
                    for (const auto& c : pt_cycle) om.add_point(c);
                    return Disjoint{om};
                }
            }
            break;
        }
        for (size_t l = 0; l < J.size(); ++l)
            if (next.intersects(J[l])) { hit = {l, J.size()}; break; }
        J.push_back(next);
    }

    if (!hit) {
        // No intersection within budget: try the monotone trapping
        // certificates for f and f^2. A certificate must also clear the
        // already-computed intervals out of the open tail zone.
        size_t n = J.size();
        auto clears = [&](const Interval& zone) {
            for (const auto& Ji : J)
                if (Ji.hi > zone.lo && Ji.lo < zone.hi) return false;
            return true;
        };
        for (long m : {1L, 2L}) {
            if (n < static_cast<size_t>(2 * m + 1)) continue;
            if (m == 1) {
                auto cert = detail::monotone_trap(f, 1, J[n - 2], J[n - 1]);
                if (cert && clears(cert->open_zone))
                    return Disjoint{IntervalSet({Interval::point(cert->limit)})};
            } else {
                if (n < 5) continue;
                auto even = detail::monotone_trap(f, 2, J[n - 4], J[n - 2]);
                if (!even || !clears(even->open_zone)) continue;
                auto odd = detail::monotone_trap(f, 2, J[n - 3], J[n - 1]);
                if (!odd || !clears(odd->open_zone)) continue;
                if (even->open_zone.intersects(odd->open_zone) &&
                    !even->open_zone.intersect(odd->open_zone).degenerate())
                    continue;
                IntervalSet om;
                om.add_point(even->limit);
                om.add_point(odd->limit);
                return Disjoint{om};
            }
        }
        return Undecided{IntervalSet(J)};
    }

    // Merge phase: grow a weakly periodic interval absorbing the orbit of U.
    auto iterate = [&](Interval I, long steps) {
        for (long k = 0; k < steps; ++k) I = f.image_of(I);
        return I;
    };
    size_t l = hit->first;
    long n = static_cast<long>(hit->second - hit->first);
    Interval I = J[l];
    if (hit->second < J.size()) I = I.hull(J[hit->second]);
    for (const auto& c : pt_cycle)
        I = I.hull(Interval::point(c));
    for (int guard = 0; guard <= budget; ++guard) {
        // Absorb under f^n until invariant.
        bool absorbed = false;
        for (int g2 = 0; g2 <= budget; ++g2) {
            Interval K = iterate(I, n);
            if (I.contains(K)) { absorbed = true; break; }
            I = I.hull(K);
        }
        if (!absorbed) return Undecided{IntervalSet({I})};
        // Reduce the period: the minimal shift whose image meets I.
        long n2 = n;
        for (long k = 1; k < n; ++k)
            if (iterate(I, k).intersects(I)) { n2 = k; break; }
        if (n2 == n) break;
        I = I.hull(iterate(I, n2));
        n = n2;
    }
    CycleOfIntervals cyc;
    Interval K = I;
    for (long k = 0; k < n; ++k) {
        cyc.orbit.push_back(K);
        K = f.image_of(K);
    }
    cyc.weak = (K != I);
    return cyc;
}

// Lemma 2.1(2): the nested intersection ∩ f^{il} J. Exact when endpoint
// orbits stabilize; otherwise the enclosure after `budget` steps (the chain
// is nested by construction).
inline Interval kernel_interval(const PLMap& f, const Interval& J, long l, int budget) {
    auto iterate = [&](Interval I) {
        for (long k = 0; k < l; ++k) I = f.image_of(I);
        return I;
    };
    Interval K = iterate(J);
    if (!J.contains(K))
        throw std::invalid_argument("kernel_interval: J is not weakly l-periodic");
    Interval cur = J;
    for (int i = 0; i < budget; ++i) {
        Interval next = iterate(cur);
        if (next == cur) return cur;
        cur = next;
    }
    return cur;
}

}  // namespace intervaldyn
