#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lensspec/lens.hpp"

namespace lensspec::towers
{

using Tuple = std::vector<std::int64_t>;

bool is_univalent(const Tuple &a, std::int64_t r);
bool is_self_reversing(const Tuple &a, std::int64_t r);
/// Some c in Z_r makes a + c and -a equal as multisets mod r.
bool is_reversible(const Tuple &a, std::int64_t r);
bool is_good(const Tuple &a, std::int64_t r);
bool is_hereditarily_good(const Tuple &a, std::int64_t r);
bool is_useful(const Tuple &a, std::int64_t r);

/// -a reduced entrywise mod r.
Tuple negate(const Tuple &a, std::int64_t r);

/// L(r^2 t; r t a_1 + 1, ..., r t a_n + 1)
lens::LensParams build_dd_lens(std::int64_t r, std::int64_t t, const Tuple &a);

struct DdPairReport
{
    lens::LensParams M;
    lens::LensParams N;
    bool isospectral = false;
    bool isometric = false;
    std::size_t cutoff = 0;
    bool heuristic = false;
    bool hereditarily_good = false;
    bool reversible = false;
    // Hereditarily good forces isospectral; reversible forces isometric.
    bool consistent = true;
};

DdPairReport dd_pair_check(std::int64_t r, std::int64_t t, const Tuple &a,
                           std::optional<std::size_t> cutoff_override = std::nullopt);

/// (1, 2, ..., n-1, r - n(n-1)/2) for a prime r > n^2.
Tuple useful_tuple(std::size_t n, std::int64_t r);

/// a + c with c = -n^{-1} * sum(a) mod r, reduced mod r: zero entry sum, same lens spaces.
Tuple shift_to_zero_sum(const Tuple &a, std::int64_t r);

struct TowerLevel
{
    std::size_t j = 0;
    std::int64_t t_j = 0;
    lens::LensParams M;
    lens::LensParams N;
};

struct TowerSpec
{
    std::int64_t r = 0;
    std::int64_t t = 0;
    std::int64_t k = 0;
    Tuple a;
    std::size_t depth = 0;
    std::vector<TowerLevel> levels;
};

TowerSpec build_tower(std::int64_t r, std::int64_t t, std::int64_t k, const Tuple &a, std::size_t depth);

struct TowerFailure
{
    std::size_t level = 0;
    std::string check;
    std::string witness;
};

struct LevelChecks
{
    std::size_t j = 0;
    bool predicate = false;
    bool congruence = false;
    std::optional<bool> full;  // absent past full_check_depth
    std::size_t full_cutoff = 0;
};

struct TowerReport
{
    bool ok = false;
    std::vector<LevelChecks> levels;
    std::vector<TowerFailure> failures;
};

TowerReport verify_tower(const TowerSpec &T, std::size_t full_check_depth, std::size_t jobs = 1);

} // namespace lensspec::towers
