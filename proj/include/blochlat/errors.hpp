#pragma once

#include <stdexcept>
#include <string>

namespace blochlat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// numerics
class DegenerateSimplexError : public Error { public: using Error::Error; };
class QuadratureFailureError : public Error { public: using Error::Error; };
class RootFindingFailureError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };

// relations
class InsufficientPrecisionError : public Error { public: using Error::Error; };
class TargetNotInvolvedError : public Error { public: using Error::Error; };
class UndefinedGcdError : public Error { public: using Error::Error; };

// triangulation
class InvalidPathError : public Error { public: using Error::Error; };
class SolveFailureError : public Error { public: using Error::Error; };
class SingularSystemError : public Error { public: using Error::Error; };
class InvalidPtolemyError : public Error { public: using Error::Error; };

// lattice
class NotInLatticeError : public Error { public: using Error::Error; };
class LatticeViolationError : public Error { public: using Error::Error; };
class RankDeficientError : public Error { public: using Error::Error; };
class LatticeOverflowError : public Error { public: using Error::Error; };
class TooManySubsetsError : public Error { public: using Error::Error; };
class UnsupportedError : public Error { public: using Error::Error; };

// census / io
class FormatError : public Error { public: using Error::Error; };

} // namespace blochlat
