#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperflow {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- hypergraph construction ------------------------------------------------

struct EmptySideError : Error {
    using Error::Error;
};
struct OverlappingSidesError : Error {
    using Error::Error;
};
struct DuplicateHyperarcError : Error {
    using Error::Error;
};
struct NonpositiveWeightError : Error {
    using Error::Error;
};
struct VertexOutOfRangeError : Error {
    using Error::Error;
};
struct LengthMismatchError : Error {
    using Error::Error;
};

// -- operators ---------------------------------------------------------------

struct ZeroDegreeVertexError : Error {
    using Error::Error;
};
struct POutOfRangeError : Error {
    using Error::Error;
};
struct ZeroFunctionError : Error {
    using Error::Error;
};
struct UnsupportedVariantError : Error {
    using Error::Error;
};

// -- dynamics ----------------------------------------------------------------

struct DegenerateInitialError : Error {
    using Error::Error;
};
struct EmptyInteriorError : Error {
    using Error::Error;
};
struct InvalidBoundaryError : Error {
    using Error::Error;
};

// -- spectral oracle ---------------------------------------------------------

struct TooLargeError : Error {
    using Error::Error;
};
struct NoConvergenceError : Error {
    using Error::Error;
};
struct SingularSystemError : Error {
    using Error::Error;
};

// -- ingest / persistence -----------------------------------------------------

struct MalformedLineError : Error {
    MalformedLineError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};
struct EmptyInputError : Error {
    using Error::Error;
};
struct UnknownLeaderError : Error {
    using Error::Error;
};
struct SchemaVersionMismatchError : Error {
    using Error::Error;
};
struct FileParseError : Error {
    FileParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace hyperflow
