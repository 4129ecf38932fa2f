#pragma once

#include <cstdint>

#include "subriem/model.hpp"

namespace subriem {

// Deterministic pseudo-random model in normal form: nilpotent base plus
// bounded second/third-order vertical jets and second-order horizontal jets,
// projected onto the normal-form constraint set. Resamples until the model
// sits safely off the degenerate strata (distinct invariants, non-colinear
// S2 vectors for n = 2, non-planar tangent-cone data).
ContactModel sample_generic_model(int n, uint64_t seed);

}  // namespace subriem
