#pragma once

#include "decomposition.hpp"

namespace intervaldyn {

// --- Property C4: interval refinement (shrink without overstretching) ---

struct ShrinkResult {
    Interval V;
    bool equality_attained = true;  // some image reaches length exactly eps
    long attained_at = 0;           // the step j with lambda(f^j V) = eps
};

// Finds V with x ∈ V ⊆ U, λ(f^i V) ≤ eps for 0 ≤ i ≤ n and λ(f^j V) = eps
// for some j ≤ n. V is cut from U by scaling toward x; the maximal image
// length is monotone in the scale, so the equality scale is isolated by
// bisection and then solved exactly on the stabilized linear piece.
inline ShrinkResult shrink_interval(const PLMap& f, const Interval& U, const Rat& x,
                                    const Rat& eps, long n) {
    if (!U.contains(x)) throw std::invalid_argument("shrink_interval: x outside U");
    if (eps <= 0 || U.length() < eps)
        throw std::invalid_argument("shrink_interval: need lambda(U) >= eps > 0");

    auto V_at = [&](const Rat& s) {
        return Interval(x + s * (U.lo - x), x + s * (U.hi - x));
    };
    // Image lengths and the combinatorial signature at scale s.
    auto probe = [&](const Rat& s, long* arg) -> Rat {
        Interval V = V_at(s);
        Rat best(-1);
        long bi = 0;
        Interval cur = V;
        for (long i = 0; i <= n; ++i) {
            Rat len = cur.length();
            if (len > best) { best = len; bi = i; }
            if (i < n) cur = f.image_of(cur);
        }
        if (arg) *arg = bi;
        return best;
    };

    Rat g1 = probe(Rat(1), nullptr);
    if (g1 < eps) {
        // Every subinterval through x stays short (plateau shadow): maximal V.
        return {U, false, 0};
    }
    if (g1 == eps) {
        long j = 0;
        probe(Rat(1), &j);
        return {U, true, j};
    }

    // Bisect s to a window, then solve the linear equation g(s) = eps on it
    // and verify exactly.
    Rat lo(0), hi(1);
    for (int it = 0; it < 200; ++it) {
        Rat mid = (lo + hi) / 2;
        Rat gm = probe(mid, nullptr);
        if (gm == eps) {
            long j = 0;
            probe(mid, &j);
            return {V_at(mid), true, j};
        }
        if (gm < eps) lo = mid; else hi = mid;
        // Attempt the exact solve on [lo, hi]: g is piecewise linear in s;
        // when both ends see the same arg-max step, interpolate.
        Rat glo = probe(lo, nullptr), ghi = probe(hi, nullptr);
        if (glo < eps && ghi > eps) {
            Rat s = lo + (eps - glo) * (hi - lo) / (ghi - glo);
            long j = 0;
            Rat gs = probe(s, &j);
            if (gs == eps) {
                // All earlier steps within bounds by monotonicity; verify.
                Interval V = V_at(s);
                Interval cur = V;
                bool ok = true;
                for (long i = 0; i <= n && ok; ++i) {
                    if (cur.length() > eps) ok = false;
                    if (i < n) cur = f.image_of(cur);
                }
                if (ok) return {V, true, j};
            }
        }
    }
    throw std::logic_error("shrink_interval: exact equality scale not isolated");
}

// --- covering margin M(eps) ---

// Least M such that every interval of length > eps/2 covers [0,1] after M
// steps, certified on a refinement whose cells are shorter than eps/5.
// Requires a mixing system.
inline long spec_margin(const MarkovSystem& ms, const Rat& eps, int refine_cap = 24) {
    if (eps <= 0 || eps > 1) throw std::invalid_argument("spec_margin: need 0 < eps <= 1");
    if (!std::holds_alternative<Mixing>(classify_transitivity(ms)))
        throw std::invalid_argument("spec_margin: system is not mixing");
    MarkovSystem sys = ms;
    Rat target = eps / 5;
    int guard = 0;
    while (sys.max_cell_length() > target) {
        sys = sys.refine();
        if (++guard > refine_cap)
            throw ResourceError("spec_margin: refinement cap exceeded");
    }
    size_t n = sys.cell_count();
    // Boolean matrix powers until all-ones; monotone once positive.
    std::vector<std::vector<char>> A = sys.cover();
    long M = 1;
    auto all_ones = [&](const std::vector<std::vector<char>>& B) {
        for (const auto& row : B)
            for (char c : row)
                if (!c) return false;
        return true;
    };
    std::vector<std::vector<char>> cur = A;
    long cap = static_cast<long>(2 * n * n + 16);
    while (!all_ones(cur)) {
        std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) {
                if (!cur[i][k]) continue;
                for (size_t j = 0; j < n; ++j)
                    if (A[k][j]) next[i][j] = 1;
            }
        cur = std::move(next);
        if (++M > cap) throw ResourceError("spec_margin: saturation cap exceeded (not primitive?)");
    }
    return M;
}

// --- i-specification requests (Section 8, Theorem 8.7) ---

struct SpecTarget {
    Rat x;
    Interval U;  // one-sided closed neighborhood of x with length epsilon
};

struct SpecRequest {
    std::vector<SpecTarget> targets;
    std::vector<std::pair<long, long>> windows;  // a_i <= b_i, increasing
    long period = 0;
    Rat epsilon;
};

struct SpecResult {
    Rat z;
    long period = 0;
    bool non_reversing = false;
    std::vector<Rat> window_max_deviation;
    std::vector<bool> entry_ok;
};

struct VerifyReport {
    bool ok = true;
    std::string violated;
    std::vector<Rat> window_max_deviation;
};

inline void validate_request(const SpecRequest& req, long M) {
    if (req.targets.empty() || req.targets.size() != req.windows.size())
        throw std::invalid_argument("spec request: target/window count mismatch");
    if (req.epsilon <= 0) throw std::invalid_argument("spec request: epsilon must be positive");
    for (const auto& t : req.targets) {
        if (!t.U.contains(t.x)) throw std::invalid_argument("spec request: x_i outside U_i");
        if (t.U.length() != req.epsilon)
            throw std::invalid_argument("spec request: lambda(U_i) must equal epsilon");
        if (t.U.lo < 0 || t.U.hi > 1)
            throw std::invalid_argument("spec request: U_i outside [0,1]");
    }
    for (size_t i = 0; i < req.windows.size(); ++i) {
        auto [a, b] = req.windows[i];
        if (a > b || a < 0) throw std::invalid_argument("spec request: bad window");
        if (i > 0 && a - req.windows[i - 1].second < M)
            throw std::invalid_argument("spec request: window gap below M(eps)");
    }
    if (req.period < M + req.windows.back().second - req.windows.front().first)
        throw std::invalid_argument("spec request: period below M + b_k - a_1");
}

namespace detail {

// Property C3 realization: a closed K ⊆ J with f(K) = I, given I ⊆ f(J).
inline Interval pullback_exact(const PLMap& f, const Interval& I, const Interval& J) {
    if (!f.image_of(J).contains(I))
        throw std::invalid_argument("pullback_exact: target not inside f(J)");
    std::vector<Rat> marks{J.lo, J.hi};
    for (const Rat& v : {I.lo, I.hi})
        for (const auto& comp : f.preimages(v).components()) {
            if (J.contains(comp.lo)) marks.push_back(comp.lo);
            if (J.contains(comp.hi)) marks.push_back(comp.hi);
        }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    for (size_t a = 0; a < marks.size(); ++a)
        for (size_t b = a + 1; b < marks.size(); ++b) {
            Interval K(marks[a], marks[b]);
            if (!K.degenerate() || I.degenerate())
                if (f.image_of(K) == I) return K;
        }
    throw std::logic_error("pullback_exact: no exact preimage interval found (C3 violated?)");
}

}  // namespace detail

// Theorem 8.7's construction: nested window intervals by alternating C4
// shrinks and exact full-cover pullbacks, then a non-reversing p-periodic
// point inside the final window.
inline SpecResult spec_point(const MarkovSystem& ms, const SpecRequest& req) {
    if (!std::holds_alternative<Mixing>(classify_transitivity(ms)))
        throw std::invalid_argument("spec_point: system is not mixing");
    const PLMap& f = ms.map();
    long M = spec_margin(ms, req.epsilon);
    validate_request(req, M);
    if (!iterated_A_set(f).empty())
        throw std::logic_error("spec_point: iterated A(f) nonempty (unreachable for PL Markov mixing)");

    long a1 = req.windows.front().first;
    size_t k = req.targets.size();

    // W: current window interval at time 0 (shifted so the first window
    // starts at 0); J[t] = f^t(W) corridor.
    Interval W(Rat(0), Rat(1));
    long horizon = req.windows.back().second - a1;
    auto corridor = [&](const Interval& W0) {
        std::vector<Interval> J{W0};
        for (long t = 1; t <= horizon; ++t) J.push_back(f.image_of(J.back()));
        return J;
    };

    long last_eps_step = 0;
    for (size_t i = 0; i < k; ++i) {
        long ai = req.windows[i].first - a1;
        long bi = req.windows[i].second - a1;
        const auto& tgt = req.targets[i];
        if (i == 0) {
            auto sh = shrink_interval(f, tgt.U, tgt.x, req.epsilon, bi - ai);
            if (!sh.equality_attained)
                throw std::logic_error("spec_point: epsilon stretch unattained in window 0");
            W = sh.V;
            last_eps_step = sh.attained_at;
            continue;
        }
        // Inside U_i, shrink around x_i; then pull the result back through
        // the corridor to time 0.
        auto sh = shrink_interval(f, tgt.U, tgt.x, req.epsilon, bi - ai);
        if (!sh.equality_attained)
            throw std::logic_error("spec_point: epsilon stretch unattained");
        auto J = corridor(W);
        // f^{ai}(W) = [0,1] by the margin (lambda(f^{last_eps}(W)) = eps);
        // walk the target backwards through the corridor.
        Interval K = sh.V;
        for (long t = ai; t > 0; --t)
            K = detail::pullback_exact(f, K, J[t - 1]);
        W = K;
        last_eps_step = ai + sh.attained_at;
    }

    // f^p(W) = [0,1]: find the p-periodic points of f^p inside W by forward
    // piece refinement, and pick a non-reversing one.
    long p = req.period;
    struct Piece {
        Interval dom;      // subinterval of W
        Rat va, vb;        // f^t values at the endpoints
    };
    std::vector<Piece> pieces{{W, W.lo, W.hi}};
    for (long t = 0; t < p; ++t) {
        std::vector<Piece> next;
        for (const auto& pc : pieces) {
            // current segment [va,vb] (monotone image of dom under f^t);
            // split at f's knots strictly inside.
            Rat lo = rat_min(pc.va, pc.vb), hi = rat_max(pc.va, pc.vb);
            std::vector<Rat> cuts;
            for (const auto& kx : f.grid())
                if (lo < kx && kx < hi) cuts.push_back(kx);
            std::sort(cuts.begin(), cuts.end());
            if (pc.va > pc.vb) std::reverse(cuts.begin(), cuts.end());
            std::vector<Rat> vals{pc.va};
            for (const auto& c : cuts) vals.push_back(c);
            vals.push_back(pc.vb);
            // Preimages (in dom coordinates) of the cut values.
            std::vector<Rat> xs{pc.dom.lo};
            for (size_t ci = 1; ci + 1 < vals.size(); ++ci) {
                Rat t0 = pc.dom.lo +
                         (vals[ci] - pc.va) * pc.dom.length() / (pc.vb - pc.va);
                xs.push_back(t0);
            }
            xs.push_back(pc.dom.hi);
            for (size_t s2 = 0; s2 + 1 < xs.size(); ++s2) {
                Piece np;
                np.dom = Interval(xs[s2], xs[s2 + 1]);
                np.va = f.eval(vals[s2]);
                np.vb = f.eval(vals[s2 + 1]);
                next.push_back(np);
            }
        }
        pieces = std::move(next);
        if (pieces.size() > 4 * kDefaultKnotCap)
            throw ResourceError("spec_point: piece refinement exploded");
    }

    std::vector<Rat> fixed;
    for (const auto& pc : pieces) {
        if (pc.dom.degenerate()) continue;
        Rat m = (pc.vb - pc.va) / pc.dom.length();
        if (m == 1) {
            if (pc.va == pc.dom.lo) fixed.push_back(pc.dom.lo);  // identity piece
            continue;
        }
        Rat z = (pc.va - m * pc.dom.lo) / (1 - m);
        if (pc.dom.contains(z)) fixed.push_back(z);
    }
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end()), fixed.end());
    if (fixed.empty())
        throw std::logic_error("spec_point: no p-periodic point in the window (theorem violated)");

    // Un-shift so that f^{a_i}(z) ∈ U_i with the original a_i, and insist on
    // the non-reversing certificate at the reported point itself.
    std::optional<Rat> chosen;
    for (const auto& zc : fixed) {
        Rat cand = (a1 > 0) ? f.eval_iter(zc, p - a1) : zc;
        if (!is_reversing(f, cand, p)) { chosen = cand; break; }
    }
    if (!chosen)
        throw std::logic_error("spec_point: only reversing periodic points (theorem violated)");
    Rat z = *chosen;

    SpecResult res;
    res.z = z;
    res.period = p;
    res.non_reversing = true;
    for (size_t i = 0; i < k; ++i) {
        auto [a, b] = req.windows[i];
        Rat dev(0);
        Rat zu = f.eval_iter(z, a), xu = req.targets[i].x;
        res.entry_ok.push_back(req.targets[i].U.contains(zu));
        for (long t = a; t <= b; ++t) {
            dev = rat_max(dev, rat_abs(zu - xu));
            zu = f.eval(zu);
            xu = f.eval(xu);
        }
        res.window_max_deviation.push_back(dev);
    }
    return res;
}

// Exact re-check of every i-specification clause, independent of the
// construction.
inline VerifyReport verify_spec(const PLMap& f, const SpecRequest& req, const Rat& z) {
    VerifyReport rep;
    if (f.eval_iter(z, req.period) != z) {
        rep.ok = false;
        rep.violated = "period";
        return rep;
    }
    if (is_reversing(f, z, req.period)) {
        rep.ok = false;
        rep.violated = "non-reversing";
        return rep;
    }
    for (size_t i = 0; i < req.targets.size(); ++i) {
        auto [a, b] = req.windows[i];
        Rat zu = f.eval_iter(z, a), xu = req.targets[i].x;
        if (!req.targets[i].U.contains(zu)) {
            rep.ok = false;
            rep.violated = "entry f^{a_i} z in U_i";
            return rep;
        }
        Rat dev(0);
        for (long t = a; t <= b; ++t) {
            dev = rat_max(dev, rat_abs(zu - xu));
            zu = f.eval(zu);
            xu = f.eval(xu);
        }
        rep.window_max_deviation.push_back(dev);
        if (dev > req.epsilon) {
            rep.ok = false;
            rep.violated = "window deviation";
            return rep;
        }
    }
    return rep;
}

}  // namespace intervaldyn
