#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation would exceed an explicit size or step budget.
struct ResourceExceeded : Error {
    using Error::Error;
};

// big_intersect of the empty family is undefined.
struct EmptyIntersection : Error {
    EmptyIntersection() : Error("big_intersect: empty family") {}
};

// A value does not have the shape an operation requires
// (ordered pair, function, numeral, sequence, ...).
struct MalformedValue : Error {
    using Error::Error;
};

// A set offered as a code of a formula or program does not decode.
struct MalformedCode : Error {
    using Error::Error;
};

struct ParseError : Error {
    size_t pos;  // byte offset into the input
    ParseError(size_t at, const std::string& what)
        : Error("parse error at " + std::to_string(at) + ": " + what), pos(at) {}
};

// A propositional translation has no entry for an atom it meets.
struct MissingAtom : Error {
    using Error::Error;
};

struct UnboundVariable : Error {
    UnboundVariable(const std::string& name) : Error("unbound variable: " + name) {}
};

struct NotDelta0 : Error {
    using Error::Error;
};

struct UnknownName : Error {
    UnknownName(const std::string& name) : Error("unknown library entry: " + name) {}
};

struct BadLineNumber : Error {
    using Error::Error;
};

// A program uses an opcode its declared flavor does not admit.
struct FlavorViolation : Error {
    using Error::Error;
};

// A run finished with a non-halting outcome where a value was required.
struct VmFailure : Error {
    using Error::Error;
};

// Asked for a bar witness at a state that does not force the disjunction.
struct NotForced : Error {
    using Error::Error;
};

}  // namespace srm
