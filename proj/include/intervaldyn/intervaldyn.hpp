#pragma once

// Exact-arithmetic toolkit for continuous piecewise-linear self-maps of
// [0,1]: periodic structure, Markov covers, entropy bounds, prolongation and
// basic sets, solenoidal towers, and i-specification shadowing.

#include "rat.hpp"
#include "intervalset.hpp"
#include "plmap.hpp"
#include "sided.hpp"
#include "orbit.hpp"
#include "markov.hpp"
#include "entropy.hpp"
#include "basicset.hpp"
#include "prolongation.hpp"
#include "decomposition.hpp"
#include "shadowing.hpp"
#include "fixtures.hpp"
