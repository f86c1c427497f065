#pragma once

#include <stdexcept>
#include <string>

namespace diskzeta {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- geometry / orbits ------------------------------------------------------

/// Disk configuration violates d/r > 2 (disks touch or overlap) or is non-finite.
class NonPhysicalGeometry : public Error {
public:
    using Error::Error;
};

/// A solved orbit has a flight chord that intersects a disk interior, or a
/// bounce that fails the outward-reflection condition.
class InadmissibleOrbit : public Error {
public:
    using Error::Error;
};

/// An iterative solve (orbit Newton, zero polish) failed to reach tolerance.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Monodromy trace has |tr M| <= 2: no expanding/contracting eigenpair.
class DegenerateMonodromy : public Error {
public:
    using Error::Error;
};

/// An orbit set operation was invoked on an empty collection.
class EmptyOrbitSet : public Error {
public:
    using Error::Error;
};

// --- cycle expansion --------------------------------------------------------

/// A prime orbit required by the requested truncation order is absent.
class MissingOrbits : public Error {
public:
    using Error::Error;
};

/// A per-prime weight vector does not cover every prime in the expansion.
class MissingWeight : public Error {
public:
    using Error::Error;
};

/// The lambda-derivative of the zeta inverse vanishes at the requested zero.
class NonSimpleZero : public Error {
public:
    using Error::Error;
};

// --- residue maps -----------------------------------------------------------

/// A sigma rule requested 1/Re(k) for a resonance with Re(k) <= 0.
class NonPositiveFrequency : public Error {
public:
    using Error::Error;
};

// --- I/O --------------------------------------------------------------------

/// A file required for reading does not exist or cannot be opened.
class MissingFile : public Error {
public:
    using Error::Error;
};

/// A write failed (permissions, disk, ...).
class IoError : public Error {
public:
    using Error::Error;
};

/// Structured input failed to parse; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line_number)
        : Error(msg), line(line_number) {}
    long line;
};

/// File header/keys disagree with what the caller requested.
class SchemaMismatch : public Error {
public:
    using Error::Error;
};

/// A resonance selector did not match any row of the resonance table.
class UnknownResonance : public Error {
public:
    using Error::Error;
};

// --- configuration ----------------------------------------------------------

/// A run configuration field is out of range or inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace diskzeta
