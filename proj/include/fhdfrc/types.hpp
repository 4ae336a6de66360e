// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhdfrc {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

enum class Errc {
    InvalidConfig,
    NonIntegerOrthogonality,
    TooManyAntennas,
    OddL,
    TooShort,
    EmptySet,
    NotCoprime,
    TooFew,
    NoCoprimePair,
    FrameTooShort,
    InvalidSchedule,
    PeakCollision,
    DivZero,
    NoConsistentTuple,
    NeitherApplicable,
    DegenerateSpectrum,
    OutOfDomain,
    ProbeMissing,
    NullingViolated,
    CompositeTooSmall,
    OutOfRange,
    Io,
};

const char* to_string(Errc code) noexcept;

/// Library error: every failure mode named by an operation contract maps to one Errc.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace fhdfrc
