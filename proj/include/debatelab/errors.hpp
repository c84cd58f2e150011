#pragma once

#include <stdexcept>

namespace debatelab {

/// Base for every domain error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A belief vector with a nonpositive pseudo-count.
struct InvalidBeliefError : Error {
    using Error::Error;
};

/// An oracle-shifted critique that would require negative mass.
struct CritiqueInfeasibleError : Error {
    using Error::Error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

/// Vote-bound inputs with a nonpositive top-two probability gap.
struct GapDegenerateError : Error {
    using Error::Error;
};

/// Frequency pairing asked for with fewer than two distinct answers.
struct PairingDegenerateError : Error {
    using Error::Error;
};

/// Malformed or unknown fields in a run configuration document.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace debatelab
