#pragma once

#include <stdexcept>
#include <string>

namespace octwitt {

enum class ErrorCode {
    InvalidModulus,
    InvalidSpec,
    NotAUnit,
    RingMismatch,
    IndexError,
    NotIdempotent,
    NotEnumerable,
    InvalidArity,
    InvalidEpsilon,
    NonFreeCentralizer,
    InvalidOctagonData,
    Unsupported,
    InvalidEntry,
    FormMismatch,
    InvalidIdempotent,
    NotUnimodular,
    Inconclusive,
    InvalidWitness,
    NotDiagonalizable,
    InvalidRank,
    CapExceeded,
    InternalInconsistency,
    HomMismatch,
    HypothesisViolated,
    NotFound,
    Overflow,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

}  // namespace octwitt
