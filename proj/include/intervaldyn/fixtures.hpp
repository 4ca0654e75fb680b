#pragma once

#include "decomposition.hpp"

namespace intervaldyn {
namespace fixtures {

// The corpus used throughout the tests and shipped as map files.

inline PLMap tent() {
    return PLMap({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(1), rat(0)});
}

inline PLMap identity_map() { return PLMap::identity(); }

// Full swap s(x) = 1 - x.
inline PLMap swap_map() { return PLMap({rat(0), rat(1)}, {rat(1), rat(0)}); }

// Transitive but not mixing: swaps [0,1/2] and [1/2,1]; f^2 is mixing on
// each half (reversed tents).
inline PLMap swap_tent() {
    return PLMap({rat(0), rat(1, 2), rat(3, 4), rat(1)},
                 {rat(1), rat(1, 2), rat(0), rat(1, 2)});
}

// Two invariant transitive halves meeting at 1/2 (Section 5 example).
inline PLMap two_halves() {
    return PLMap({rat(0), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)},
                 {rat(1, 2), rat(0), rat(1, 2), rat(1), rat(1, 2)});
}

// Linear contraction toward 1/2 (not Markov: breakpoint orbits creep).
inline PLMap contraction() {
    return PLMap({rat(0), rat(1)}, {rat(1, 4), rat(3, 4)});
}

// Plateau at a local maximum: constant 1/2 on [1/4, 3/4].
inline PLMap plateau() {
    return PLMap({rat(0), rat(1, 4), rat(3, 4), rat(1)},
                 {rat(0), rat(1, 2), rat(1, 2), rat(0)});
}

// Omega vs omega fixture: a one-way cell [7/16,1/2] feeding the mixing core
// [1/2,1], flagged as nonwandering only through its fixed endpoint 1/2.
inline PLMap omeganot() {
    return PLMap({rat(0), rat(3, 8), rat(7, 16), rat(1, 2), rat(3, 4), rat(1)},
                 {rat(3, 8), rat(1, 2), rat(5, 8), rat(1, 2), rat(1), rat(1, 2)});
}

// Example 2.5: f(0)=0, f(1)=1 and f(x) > x on (0,1).
inline PLMap monotone_push() {
    return PLMap({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(1), rat(1)});
}

// Lemma 4.5 case 1: E(M,f) = {1/2}; f swaps the halves, everything else
// collapses onto the boundary 2-cycle {0,1} through the plateau.
inline PLMap swap_collapse() {
    return PLMap({rat(0), rat(1, 2), rat(3, 4), rat(1)},
                 {rat(1), rat(1, 2), rat(0), rat(0)});
}

// Cantor basic set with an attracting plateau gap in the middle.
inline PLMap cantor_trap() {
    return PLMap({rat(0), rat(1, 3), rat(1, 2), rat(7, 12), rat(2, 3), rat(1)},
                 {rat(0), rat(1), rat(1, 2), rat(1, 2), rat(1), rat(0)});
}

// Mixing with single-step A(f) = {0}: the second fixture of acceptance 9.
inline PLMap skew_tent() {
    return PLMap({rat(0), rat(2, 3), rat(1)}, {rat(0), rat(1), rat(0)});
}

// Mixing with A(f) = empty: both endpoints have interior preimages.
inline PLMap wmap() {
    return PLMap({rat(0), rat(1, 3), rat(2, 3), rat(1)},
                 {rat(0), rat(1), rat(0), rat(1)});
}

// Lemma 8.5 case-5 A-structure (f(0)=1, f(1)=0, no interior single-step
// preimages of either endpoint); necessarily not mixing.
inline PLMap case5() {
    return PLMap({rat(0), rat(1, 4), rat(1, 2), rat(1)},
                 {rat(1), rat(1, 4), rat(3, 4), rat(0)});
}

// Provably not Markov: slope 4/3 forces strictly growing 3-power
// denominators along the breakpoint orbit.
inline PLMap notmarkov() {
    return PLMap({rat(0), rat(1, 2), rat(1)}, {rat(0), rat(2, 3), rat(0)});
}

inline PLMap tower(int depth) { return build_doubling_tower(depth).map; }

struct NamedMap {
    std::string name;
    PLMap map;
    bool markov;  // breakpoint orbit stabilizes
};

inline std::vector<NamedMap> corpus() {
    std::vector<NamedMap> v;
    v.push_back({"tent", tent(), true});
    v.push_back({"identity", identity_map(), true});
    v.push_back({"swap-tent", swap_tent(), true});
    v.push_back({"two-halves", two_halves(), true});
    v.push_back({"contraction", contraction(), false});
    v.push_back({"plateau", plateau(), true});
    v.push_back({"omeganot", omeganot(), true});
    for (int d = 1; d <= 5; ++d)
        v.push_back({"tower-depth" + std::to_string(d), tower(d), true});
    v.push_back({"monotone-push", monotone_push(), true});
    v.push_back({"swap-collapse", swap_collapse(), true});
    v.push_back({"cantor-trap", cantor_trap(), true});
    v.push_back({"skew-tent", skew_tent(), true});
    v.push_back({"wmap", wmap(), true});
    v.push_back({"case5", case5(), true});
    v.push_back({"notmarkov", notmarkov(), false});
    return v;
}

// The spec's mixing sub-corpus (used by entropy / shadowing sweeps).
inline std::vector<NamedMap> mixing_corpus() {
    std::vector<NamedMap> v;
    v.push_back({"tent", tent(), true});
    v.push_back({"skew-tent", skew_tent(), true});
    v.push_back({"wmap", wmap(), true});
    return v;
}

}  // namespace fixtures
}  // namespace intervaldyn
