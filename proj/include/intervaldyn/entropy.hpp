#pragma once

#include "markov.hpp"

#include <cmath>

namespace intervaldyn {

struct EntropyResult {
    double value = 0.0;  // log of the spectral radius (midpoint estimate)
    double lo = 0.0, hi = 0.0;
    Rat rho_lo{1}, rho_hi{1};  // rational enclosure of the spectral radius
    bool exact = false;        // enclosure is a single rational point
};

namespace detail {

// Collatz-Wielandt enclosure of the Perron root of an irreducible
// non-permutation 0/1 block, run on A+I (primitive when A is irreducible).
// Exact rational bounds; the iteration vector stays integral.
inline std::pair<Rat, Rat> perron_enclosure(const std::vector<std::vector<char>>& cover,
                                            const std::vector<size_t>& nodes,
                                            const Rat& rel_tol, int max_iter) {
    size_t k = nodes.size();
    std::vector<Int> v(k, 1), w(k);
    Rat lo(0), hi(0);
    for (int it = 0; it < max_iter; ++it) {
        for (size_t i = 0; i < k; ++i) {
            Int acc = v[i];  // the +I term
            for (size_t j = 0; j < k; ++j)
                if (cover[nodes[i]][nodes[j]]) acc += v[j];
            w[i] = acc;
        }
        lo = Rat(w[0], v[0]);
        hi = lo;
        for (size_t i = 1; i < k; ++i) {
            Rat r(w[i], v[i]);
            if (r < lo) lo = r;
            if (r > hi) hi = r;
        }
        if (hi == lo) break;                       // exact eigenvector found
        if ((hi - lo) <= rel_tol * (lo - 1)) break;  // relative to rho(A) = rho-1
        v = w;
        // Keep the integers small.
        Int g = v[0];
        for (size_t i = 1; i < k && g != 1; ++i) g = boost::multiprecision::gcd(g, v[i]);
        if (g > 1)
            for (auto& x : v) x /= g;
    }
    return {lo - 1, hi - 1};
}

}  // namespace detail

// log of the spectral radius of the cover matrix, with a certified enclosure.
// Power iteration with exact rational bounds per strongly connected
// component; rounding happens only at the final logarithm.
inline EntropyResult entropy(const MarkovSystem& ms, double tol = 1e-9, int max_iter = 200000) {
    size_t n = ms.cell_count();
    auto ids = ms.scc_ids();
    int comp_count = 0;
    for (size_t i = 0; i < n; ++i) comp_count = std::max(comp_count, ids[i] + 1);

    Rat rho_lo(1), rho_hi(1);  // out-degrees >= 0; a Markov cover always has a cycle
    bool any_cycle = false;
    if (tol <= 0 || tol > 0.5) throw std::invalid_argument("entropy: bad tolerance");
    Rat rel_tol(Int(1), Int(static_cast<long long>(4.0 / tol)));
    for (int c = 0; c < comp_count; ++c) {
        std::vector<size_t> nodes;
        for (size_t i = 0; i < n; ++i)
            if (ids[i] == c) nodes.push_back(i);
        bool has_edge = false;
        bool permutation = true;
        for (size_t a : nodes) {
            int deg = 0;
            for (size_t b : nodes) deg += ms.covers(a, b) ? 1 : 0;
            if (deg > 0) has_edge = true;
            if (deg != 1) permutation = false;
        }
        if (!has_edge) continue;  // transient singleton
        any_cycle = true;
        if (permutation) continue;  // rho = 1 exactly
        auto [lo, hi] = detail::perron_enclosure(ms.cover(), nodes, rel_tol, max_iter);
        if (lo > rho_lo) rho_lo = lo;
        if (hi > rho_hi) rho_hi = hi;
    }
    (void)any_cycle;

    EntropyResult res;
    res.rho_lo = rho_lo;
    res.rho_hi = rho_hi;
    res.exact = (rho_lo == rho_hi);
    if (res.exact && rho_lo == 1) {
        res.value = res.lo = res.hi = 0.0;
        return res;
    }
    double dlo = std::log(to_double(rho_lo));
    double dhi = std::log(to_double(rho_hi));
    // Slack for double rounding of the rational-to-double conversions.
    const double slack = 1e-13;
    res.lo = dlo - slack;
    res.hi = dhi + slack;
    res.value = 0.5 * (res.lo + res.hi);
    return res;
}

}  // namespace intervaldyn
