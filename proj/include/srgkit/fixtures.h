#pragma once

#include "srgkit/lti.h"

namespace srgkit::fixtures {

/// Two-input unstable system with one mode at 1.05.
StateSpace unstable_mimo();

/// Second-order low-pass filter.
StateSpace low_pass();

/// Second-order high-pass filter sharing the low-pass dynamics.
StateSpace high_pass();

}  // namespace srgkit::fixtures
