#pragma once

// Umbrella header: character groups, sieves, sifted sums, L-series, Dirichlet
// polynomial mean values, and the progression error probes.

#include "siftlab/arith.hpp"
#include "siftlab/dirichlet_poly.hpp"
#include "siftlab/errors.hpp"
#include "siftlab/linnik.hpp"
#include "siftlab/lseries.hpp"
#include "siftlab/quadrature.hpp"
#include "siftlab/report.hpp"
#include "siftlab/residues.hpp"
#include "siftlab/sieve.hpp"
#include "siftlab/sifted.hpp"

namespace siftlab {
inline constexpr const char* version = "0.1.0";
}
