#pragma once

#include <random>
#include <vector>

#include "dnc/phase.hpp"

namespace dnc::test {

/// Exact phase with denominator in 1..max_den.
inline Phase random_phase(std::mt19937_64& rng, int max_den = 12)
{
    std::uniform_int_distribution<int> den(1, max_den);
    const int q = den(rng);
    std::uniform_int_distribution<int> num(0, q - 1);
    return Phase::exact(num(rng), q);
}

inline StructureConstants random_constants(std::mt19937_64& rng, int n, int max_den = 12)
{
    std::vector<PhaseEntry> upper;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) upper.push_back({i, j, random_phase(rng, max_den)});
    return StructureConstants::from_upper(n, upper);
}

inline StructureConstants constants2(const Phase& z12)
{
    return StructureConstants::from_upper(2, {{1, 2, z12}});
}

} // namespace dnc::test
