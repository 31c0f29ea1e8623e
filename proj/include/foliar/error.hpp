#pragma once

#include <stdexcept>
#include <string>

namespace foliar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FOLIAR_ERROR(Name)                      \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

// triangulation
FOLIAR_ERROR(InvolutionError);
FOLIAR_ERROR(SelfGluingError);
FOLIAR_ERROR(BadCharacter);
FOLIAR_ERROR(TruncatedSignature);
FOLIAR_ERROR(NonManifoldGluing);
FOLIAR_ERROR(InvalidInput);

// veering
FOLIAR_ERROR(NotTaut);

// covers
FOLIAR_ERROR(DisconnectedInput);
FOLIAR_ERROR(InvalidCocycle);

// geometry
FOLIAR_ERROR(MissingCuspRows);
FOLIAR_ERROR(NonGeometric);
FOLIAR_ERROR(SingularJacobian);
FOLIAR_ERROR(IncompleteSolution);

// catalog
FOLIAR_ERROR(DanglingName);
FOLIAR_ERROR(SlopeArityMismatch);
FOLIAR_ERROR(MissingTriangulation);

// obstruction
FOLIAR_ERROR(CyclicIdentification);

#undef FOLIAR_ERROR

/// Malformed text input; carries the 1-based line number.
class SyntaxError : public Error {
public:
    SyntaxError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Malformed data file (CSV); carries file and line.
class ParseError : public Error {
public:
    ParseError(const std::string& file, int line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace foliar
