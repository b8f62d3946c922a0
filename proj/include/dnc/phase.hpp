#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "dnc/rational.hpp"

namespace dnc {

/// A unimodular complex number. Exact phases are rational rotations
/// e^{2 pi i q} with q kept in [0, 1); approximate phases carry an angle in
/// radians. Any product involving an approximate phase is approximate.
class Phase {
public:
    /// The unit 1 = Exact(0).
    Phase() = default;

    static Phase exact(const Rational& turns);
    static Phase exact(std::int64_t num, std::int64_t den) { return exact(Rational(num, den)); }
    static Phase radians(double theta);
    static Phase one() { return Phase(); }

    bool is_exact() const noexcept { return exact_; }
    bool is_one() const noexcept { return exact_ && turns_.is_zero(); }

    /// Fraction of a full turn; meaningful for exact phases only.
    const Rational& turns() const noexcept { return turns_; }
    /// Angle in radians, in [0, 2 pi) for exact phases.
    double angle() const noexcept;
    std::complex<double> as_complex() const noexcept;

    Phase conj() const;
    Phase pow(std::int64_t k) const;

    friend Phase operator*(const Phase& a, const Phase& b);
    Phase& operator*=(const Phase& o) { return *this = *this * o; }

    /// Structural equality: exact phases compare by value, approximate
    /// phases by angle bit pattern. Exact and approximate never compare equal.
    friend bool operator==(const Phase& a, const Phase& b);
    friend bool operator<(const Phase& a, const Phase& b);

    /// `w(p/q)` for exact phases (`1` for the unit), `rad(theta)` otherwise.
    std::string to_string() const;

private:
    bool exact_ = true;
    Rational turns_{};
    double radians_ = 0.0;
};

Phase phase_mul(const Phase& p, const Phase& q);
Phase phase_pow(const Phase& p, std::int64_t k);

struct PhaseEntry {
    int i = 0;
    int j = 0;
    Phase z;
};

/// The table z_ij of unimodular structure constants for n isometries.
/// Indices are 1-based. z_ii = 1 and z_ji = conj(z_ij).
class StructureConstants {
public:
    /// Builds the full table from the strictly upper entries (i < j).
    /// Missing pairs default to 1; duplicates or out-of-range indices throw.
    static StructureConstants from_upper(int n, const std::vector<PhaseEntry>& upper);
    /// All constants equal to 1 (doubly commuting case).
    static StructureConstants trivial(int n) { return from_upper(n, {}); }

    int n() const noexcept { return n_; }
    const Phase& z(int i, int j) const;

    bool is_exact() const;

    /// Constants for the sub-family with the given (1-based, increasing)
    /// indices, renumbered 1..m.
    StructureConstants restricted(const std::vector<int>& indices) const;

    /// First pair (i < j) where the two tables differ, or (0, 0) when equal.
    std::pair<int, int> first_difference(const StructureConstants& other) const;

    friend bool operator==(const StructureConstants& a, const StructureConstants& b)
    {
        return a.n_ == b.n_ && a.table_ == b.table_;
    }

private:
    int n_ = 0;
    std::vector<Phase> table_;
};

} // namespace dnc
