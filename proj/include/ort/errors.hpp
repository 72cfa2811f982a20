#pragma once

#include <stdexcept>
#include <string>

namespace ort {

// Error hierarchy: every failure raised by this library derives from
// ort::Error so callers can catch the whole family at one site.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Fock-space truncation too small for the requested state (tail > 1e-12).
struct CutoffTooSmall : Error {
    using Error::Error;
};

// Constructor parameters outside the family's validity range.
struct InvalidParameter : Error {
    using Error::Error;
};

// Matrix has an eigenvalue below -1e-10; not a physical density matrix.
struct NotPSD : Error {
    using Error::Error;
};

// Decomposition does not reconstruct the target density matrix.
struct DecompositionMismatch : Error {
    using Error::Error;
};

// Special-basis assumptions violated beyond tolerance.
struct AssumptionViolation : Error {
    using Error::Error;
};

// Decomposition recipe requested for the wrong piecewise branch.
struct BranchMismatch : Error {
    using Error::Error;
};

// Roof-solver input violates one of the special-basis conditions.
struct ConditionViolation : Error {
    using Error::Error;
};

struct PreconditionViolation : Error {
    using Error::Error;
};

struct InvalidRecipeParameter : Error {
    using Error::Error;
};

// Candidate grid would exceed the configured column cap.
struct GridTooLarge : Error {
    using Error::Error;
};

// LP is unbounded below; indicates a construction bug, the roof objective
// is bounded on the feasible set.
struct Unbounded : Error {
    using Error::Error;
};

// Simplex hit its iteration cap without converging.
struct NumericalStall : Error {
    using Error::Error;
};

// State-spec / kernel-spec grammar error.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace ort
