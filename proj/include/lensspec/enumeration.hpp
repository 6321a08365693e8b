#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lensspec/lens.hpp"

namespace lensspec::enumeration
{

enum class Mode
{
    manifold,  // every gcd(q, s_i) = 1
    orbifold,  // gcd(q, s_1, ..., s_n) = 1
};

struct FamilyReport
{
    std::size_t n = 0;
    std::int64_t q = 0;
    Mode mode = Mode::manifold;
    std::size_t classes = 0;
    std::size_t prefix = 0;  // bucketing cutoff
    std::size_t cutoff = 0;  // certification cutoff for buckets of size >= 2
    // Isospectrality classes of size >= 2, members sorted; ordered by first member.
    std::vector<std::vector<lens::IsometryClassKey>> families;
    std::optional<std::pair<lens::IsometryClassKey, lens::IsometryClassKey>> minimal_pair;
};

/// unique_count counts the spectrally unique classes and nonunique_count the
/// rest. The published density table prints nonunique_count in its third
/// column next to density = unique_count / total_count.
struct DensityReport
{
    std::size_t n = 0;
    std::int64_t x = 0;
    BigInt unique_count;
    BigInt nonunique_count;
    BigInt total_count;
    mpq_class density;
};

enum class Cell
{
    none,
    pair,
    pair_highest,  // a pair exists and no smaller q has one
};

struct ExistenceTable
{
    std::vector<std::size_t> ns;
    std::vector<std::int64_t> qs;
    std::vector<std::vector<Cell>> cells;  // cells[row for n][column for q]
};

struct Table1Row
{
    std::int64_t q = 0;
    std::int64_t q0 = 0;
    std::size_t n = 0;
    lens::IsometryClassKey first;
    lens::IsometryClassKey second;
    std::size_t family_size = 0;
};

struct SearchOptions
{
    std::optional<std::size_t> prefix;           // default 2n + 10
    std::optional<std::size_t> cutoff_override;  // below the certified cutoff marks results heuristic
    std::size_t jobs = 1;
    // When set, per-(n, q) sweep results are cached here and reused on rerun.
    std::string workdir;
};

std::vector<lens::IsometryClassKey> enumerate_classes(std::size_t n, std::int64_t q, Mode mode);

FamilyReport find_isospectral_families(std::size_t n, std::int64_t q, Mode mode, const SearchOptions &opts = {});

bool heuristic(const FamilyReport &report);

/// Pair cells need a non-isometric isospectral pair at that q; pair_highest
/// additionally scans every 1 <= q' < q for the same n.
ExistenceTable existence_table(const std::vector<std::size_t> &ns,
                               const std::vector<std::int64_t> &qs,
                               Mode mode,
                               const SearchOptions &opts = {});

/// Some unit m has m != +-s_i for all i.
bool is_irreducible(const lens::LensParams &L);

/// L(q; s ++ r copies of t(q)).
lens::LensParams extend_params(const lens::LensParams &L, std::size_t r);

bool congruence_condition(std::int64_t n);

DensityReport density(std::size_t n, std::int64_t x, const SearchOptions &opts = {});

/// Rows for (q, n) carrying a family with an irreducible member: the
/// lexicographically smallest irreducible member and its smallest partner.
std::vector<Table1Row> table1(std::size_t nmin, std::size_t nmax, std::int64_t qmin, std::int64_t qmax,
                              const SearchOptions &opts = {});
std::optional<Table1Row> table1_row(const FamilyReport &report);

std::string cell_symbol(Cell c);

} // namespace lensspec::enumeration
