#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lensspec::properties
{

/// Outcome of one randomized property; `counterexample` holds the first failure.
struct PropertyResult
{
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string counterexample;
};

PropertyResult oracle_agreement(std::uint64_t seed, std::size_t cases);
/// Units, per-entry signs and permutations leave the canonical key fixed.
PropertyResult key_invariance(std::uint64_t seed, std::size_t cases);
PropertyResult reversible_iff_isometric(std::uint64_t seed, std::size_t cases);
/// gcd(n, r) = 1, zero entry sum and not self-reversing imply irreversible.
PropertyResult zero_sum_irreversible(std::uint64_t seed, std::size_t cases);
/// Hereditarily good tuples give isospectral L(r,t,a), L(r,t,-a).
PropertyResult hereditarily_good_isospectral(std::uint64_t seed, std::size_t cases);
/// Lattice counts and the group-character series agree for q in {1, 2, 3, 4, 6}.
PropertyResult lens_orbifold_agreement(std::uint64_t seed, std::size_t cases);

/// Every property above, each with its own stream derived from `seed`.
std::vector<PropertyResult> run_all(std::uint64_t seed, std::size_t cases);

} // namespace lensspec::properties
