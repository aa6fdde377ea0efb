#pragma once

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <stdexcept>
#include <string>

namespace aq {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Orbital angular momentum quantum number.
struct OamIndex {
    int value = 0;

    constexpr OamIndex() = default;
    constexpr explicit OamIndex(int l) : value(l) {}

    constexpr OamIndex operator-() const { return OamIndex{-value}; }
    friend constexpr auto operator<=>(OamIndex, OamIndex) = default;
};

/// Slit label on the centered grid k in {-(N-1)/2, ..., (N-1)/2}.
///
/// Stored as 2k so that even slit counts (half-integer labels) stay exact.
struct SlitIndex {
    int twice = 0;

    static constexpr SlitIndex from_twice(int twice_k) { return SlitIndex{twice_k}; }
    static constexpr SlitIndex from_integer(int k) { return SlitIndex{2 * k}; }

    /// Converts a 0-based label n = 0..N-1 into the centered grid.
    static constexpr SlitIndex from_zero_based(int n, int n_slits) {
        return SlitIndex{2 * n - (n_slits - 1)};
    }

    constexpr double value() const { return 0.5 * twice; }

    /// Inverse of from_zero_based.
    constexpr int zero_based(int n_slits) const { return (twice + n_slits - 1) / 2; }

    friend constexpr auto operator<=>(SlitIndex, SlitIndex) = default;
};

std::string to_string(SlitIndex k);

// Error taxonomy. Callers catch by category; messages carry the detail.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalDegeneracy : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationInsufficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aq
