#include "dnc/phase.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "dnc/error.hpp"

namespace dnc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalize_angle(double theta)
{
    double r = std::fmod(theta, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

} // namespace

Phase Phase::exact(const Rational& turns)
{
    Phase p;
    p.turns_ = turns.mod_one();
    return p;
}

Phase Phase::radians(double theta)
{
    Phase p;
    p.exact_ = false;
    p.radians_ = normalize_angle(theta);
    return p;
}

double Phase::angle() const noexcept
{
    return exact_ ? kTwoPi * turns_.to_double() : radians_;
}

std::complex<double> Phase::as_complex() const noexcept
{
    if (exact_) {
        // Hit the axis values exactly.
        const auto n = turns_.num();
        const auto d = turns_.den();
        if (n == 0) return {1.0, 0.0};
        if (d == 2) return {-1.0, 0.0};
        if (d == 4) return n == 1 ? std::complex<double>{0.0, 1.0} : std::complex<double>{0.0, -1.0};
    }
    return std::polar(1.0, angle());
}

Phase Phase::conj() const
{
    return pow(-1);
}

Phase Phase::pow(std::int64_t k) const
{
    if (exact_) return exact(turns_ * Rational(k));
    return radians(radians_ * static_cast<double>(k));
}

Phase operator*(const Phase& a, const Phase& b)
{
    if (a.exact_ && b.exact_) return Phase::exact(a.turns_ + b.turns_);
    return Phase::radians(a.angle() + b.angle());
}

bool operator==(const Phase& a, const Phase& b)
{
    if (a.exact_ != b.exact_) return false;
    return a.exact_ ? a.turns_ == b.turns_ : a.radians_ == b.radians_;
}

bool operator<(const Phase& a, const Phase& b)
{
    if (a.exact_ != b.exact_) return a.exact_;
    return a.exact_ ? a.turns_ < b.turns_ : a.radians_ < b.radians_;
}

std::string Phase::to_string() const
{
    if (exact_) {
        if (turns_.is_zero()) return "1";
        return "w(" + std::to_string(turns_.num()) + "/" + std::to_string(turns_.den()) + ")";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "rad(%.17g)", radians_);
    return buf;
}

Phase phase_mul(const Phase& p, const Phase& q)
{
    return p * q;
}

Phase phase_pow(const Phase& p, std::int64_t k)
{
    return p.pow(k);
}

StructureConstants StructureConstants::from_upper(int n, const std::vector<PhaseEntry>& upper)
{
    if (n < 1) throw Error("structure constants need n >= 1, got " + std::to_string(n));
    StructureConstants zc;
    zc.n_ = n;
    zc.table_.assign(static_cast<std::size_t>(n) * n, Phase::one());
    std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
    for (const auto& e : upper) {
        if (e.i < 1 || e.j < 1 || e.i > n || e.j > n)
            throw Error("structure constant index out of range: (" + std::to_string(e.i) + ", " +
                        std::to_string(e.j) + ") for n = " + std::to_string(n));
        if (e.i >= e.j)
            throw Error("structure constants are given for pairs i < j, got (" + std::to_string(e.i) + ", " +
                        std::to_string(e.j) + ")");
        auto idx = static_cast<std::size_t>(e.i - 1) * n + (e.j - 1);
        if (seen[idx])
            throw Error("duplicate structure constant for pair (" + std::to_string(e.i) + ", " +
                        std::to_string(e.j) + ")");
        seen[idx] = true;
        zc.table_[idx] = e.z;
        zc.table_[static_cast<std::size_t>(e.j - 1) * n + (e.i - 1)] = e.z.conj();
    }
    return zc;
}

const Phase& StructureConstants::z(int i, int j) const
{
    if (i < 1 || j < 1 || i > n_ || j > n_)
        throw Error("structure constant index out of range: (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    return table_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)];
}

bool StructureConstants::is_exact() const
{
    for (const auto& p : table_)
        if (!p.is_exact()) return false;
    return true;
}

StructureConstants StructureConstants::restricted(const std::vector<int>& indices) const
{
    std::vector<PhaseEntry> upper;
    for (std::size_t a = 0; a < indices.size(); ++a)
        for (std::size_t b = a + 1; b < indices.size(); ++b)
            upper.push_back({static_cast<int>(a + 1), static_cast<int>(b + 1), z(indices[a], indices[b])});
    if (indices.empty()) {
        StructureConstants zc;
        return zc;
    }
    return from_upper(static_cast<int>(indices.size()), upper);
}

std::pair<int, int> StructureConstants::first_difference(const StructureConstants& other) const
{
    if (n_ != other.n_) return {-1, -1};
    for (int i = 1; i <= n_; ++i)
        for (int j = i + 1; j <= n_; ++j)
            if (!(z(i, j) == other.z(i, j))) return {i, j};
    return {0, 0};
}

} // namespace dnc
