#pragma once

#include <stdexcept>
#include <string>

namespace fptf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The map coefficients violate the area-based univalence test.
class NonUnivalentMap : public Error {
public:
    explicit NonUnivalentMap(const std::string& msg) : Error(msg) {}
};

/// Two adjacent layers have identical conductivity; the interface carries no contrast.
class DegenerateInterface : public Error {
public:
    explicit DegenerateInterface(const std::string& msg) : Error(msg) {}
};

/// Transfer-matrix entries would overflow double precision.
class TruncationOverflow : public Error {
public:
    explicit TruncationOverflow(const std::string& msg) : Error(msg) {}
};

/// The truncated system I - conj(X)X failed the conditioning check.
class IllConditionedSystem : public Error {
public:
    explicit IllConditionedSystem(const std::string& msg) : Error(msg) {}
};

/// Closed-form ellipse denominator vanishes (resonance parameter).
class SingularContrast : public Error {
public:
    explicit SingularContrast(const std::string& msg) : Error(msg) {}
};

/// Table and request disagree on the truncation order.
class InconsistentTruncation : public Error {
public:
    explicit InconsistentTruncation(const std::string& msg) : Error(msg) {}
};

/// Core-series consistency residual exceeded its bound (truncation too small).
class ConsistencyFailure : public Error {
public:
    explicit ConsistencyFailure(const std::string& msg) : Error(msg) {}
};

/// Query point lies where no series representation is available.
class OutOfDomain : public Error {
public:
    explicit OutOfDomain(const std::string& msg) : Error(msg) {}
};

/// Design solver could not start from the supplied point.
class InfeasibleStart : public Error {
public:
    explicit InfeasibleStart(const std::string& msg) : Error(msg) {}
};

/// Objective became non-finite during iteration.
class NonFiniteObjective : public Error {
public:
    explicit NonFiniteObjective(const std::string& msg) : Error(msg) {}
};

/// Malformed or inconsistent user configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace fptf
