#pragma once

#include "homwalk/group.hpp"
#include "homwalk/subgroup.hpp"

namespace homwalk::examples {

// Strongly contracting SL(2) measure: rotations composed with solid
// hyperbolic parts.  Positive top Lyapunov exponent with a comfortable
// margin; the workhorse for drift, large-deviation and spectral-gap runs.
FiniteMeasure sl2_hyperbolic();

// Rotation-dominated SL(2) measure whose hyperbolic strength is so small
// that the drift is statistically indistinguishable from zero at the
// operating scales used here; exercises the centered regime honestly in a
// group where the true drift is never exactly zero.
FiniteMeasure sl2_centered();

// A single rotation: compact support, no contraction.  Degenerate on
// purpose, for warning paths and boundary certificates.
FiniteMeasure sl2_rotation();

// Generic SL(3) measure with an interior Lyapunov vector.
FiniteMeasure sl3_generic();

// Generic SL(4) measure; used with synthetic symmetrization for the
// centered high-codimension regime.
FiniteMeasure sl4_generic();

// Direction of the SL(3) drift, frozen from a long offline run so that
// subgroup specs can be built exactly on (or exactly off) the drift line.
Vector sl3_drift_direction();

SubgroupSpec sl2_full();        // d=2, a' = 0, full N: codimension-1 quotient
SubgroupSpec sl2_proper_n();    // d=2, a' = 0, proper unipotent part
SubgroupSpec sl3_drift_off();   // d=3, a' a line well away from the drift
SubgroupSpec sl3_recurrent();   // d=3, a' = the frozen drift line, full N
SubgroupSpec sl4_codim3();      // d=4, a' = 0: codimension-3 quotient

}  // namespace homwalk::examples
