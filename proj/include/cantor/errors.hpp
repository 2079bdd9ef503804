#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Base class for all library errors. Subclasses distinguish the failure
// kinds the CLI maps to exit codes: parse errors exit 1, everything else 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input that does not conform to a schema (bad rational, bad word, bad JSON).
struct ParseError : Error {
    using Error::Error;
};

// An operation would enumerate more cylinders than the configured depth
// budget allows, or a word exceeds the hard length cap.
struct DepthBudgetError : Error {
    using Error::Error;
};

// Conditioning on a cylinder of mass zero.
struct NullConditioningError : Error {
    using Error::Error;
};

// The counterexample joint was asked for a value that depends on
// approximants beyond the supplied prefix of the sequence.
struct InsufficientApproximantsError : Error {
    using Error::Error;
};

// A hypothesis required by a derivation does not hold for the given inputs
// (e.g. the level-sum bound checked before a test transfer).
struct HypothesisViolationError : Error {
    using Error::Error;
};

// Any other violated operation precondition (empty word where a nonempty one
// is required, index out of range, undecidable membership, ...).
struct PreconditionError : Error {
    using Error::Error;
};

}  // namespace cantor
