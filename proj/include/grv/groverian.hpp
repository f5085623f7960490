#pragma once

// Umbrella header: the Groverian entanglement measure G = sqrt(1 - P_max)
// for two- and three-qubit pure states, with closed forms per state type,
// an independent numerical maximizer, and invariant-based consistency checks.

#include "grv/analytic.hpp"
#include "grv/bloch.hpp"
#include "grv/canonical.hpp"
#include "grv/errors.hpp"
#include "grv/forms.hpp"
#include "grv/invariants.hpp"
#include "grv/io.hpp"
#include "grv/linalg.hpp"
#include "grv/numeric.hpp"
#include "grv/rng.hpp"
#include "grv/state.hpp"
#include "grv/verify.hpp"
