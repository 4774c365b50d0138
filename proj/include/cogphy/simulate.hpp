#pragma once

#include <cstdint>

#include "cogphy/binary_matrix.hpp"
#include "cogphy/ctmc.hpp"
#include "cogphy/tree.hpp"

namespace cogphy {

// Evolves n_chars binary characters down the tree: per character a Gamma
// category and a stationary root state are drawn, then states propagate
// through transition_matrix along each branch. Cells are masked to '?'
// independently with missing_fraction (a mask leaving a character fully
// unobserved is redrawn). Deterministic given the seed.
BinaryMatrix simulate_matrix(const Tree& tree, const BinaryCTMC& model,
                             const GammaRates& gamma, std::size_t n_chars,
                             double missing_fraction, std::uint64_t seed);

}  // namespace cogphy
