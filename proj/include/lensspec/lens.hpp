#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lensspec/modarith.hpp"

namespace lensspec::lens
{

/**
 * Lens space or lens orbifold L(q; s_1, ..., s_n) = S^{2n-1} / <gamma>, where
 * gamma rotates the i-th coordinate plane by 2*pi*s_i/q.
 *
 * Parameters are stored reduced mod q. Inputs whose entries share a factor
 * with q are accepted; effective_order records the order of the cyclic group
 * they actually generate and every spectral routine works with that group.
 */
struct LensParams
{
    std::int64_t q = 1;
    std::vector<std::int64_t> s;
    bool manifold = true;
    std::int64_t effective_order = 1;

    std::size_t n() const { return s.size(); }
    std::size_t dimension() const { return 2 * s.size() - 1; }

    /// The same group written with modulus effective_order.
    LensParams effective() const;

    friend bool operator==(const LensParams &, const LensParams &) = default;
};

/// Lexicographically smallest sign-normalized, sorted parameter list over all unit scalings.
struct IsometryClassKey
{
    std::int64_t q = 1;
    std::vector<std::int64_t> canonical_s;

    friend bool operator==(const IsometryClassKey &, const IsometryClassKey &) = default;
    friend auto operator<=>(const IsometryClassKey &, const IsometryClassKey &) = default;
};

/// Exact multiplicities dim H_k^Gamma for k = 0..K together with the lattice counts they come from.
struct SpectrumSlice
{
    std::int64_t q = 1;
    std::size_t n = 0;
    std::size_t K = 0;
    std::vector<BigInt> lattice_counts;
    std::vector<BigInt> multiplicities;
    std::vector<std::int64_t> eigenvalues;

    friend bool operator==(const SpectrumSlice &, const SpectrumSlice &) = default;
};

/// Outcome of an isospectrality comparison, with the cutoff that backs it.
struct IsospectralDecision
{
    bool isospectral = false;
    std::size_t cutoff = 0;
    // Set when the comparison stopped below the certified cutoff.
    bool heuristic = false;
    std::string reason;
};

LensParams make_lens(std::int64_t q, std::vector<std::int64_t> s);

IsometryClassKey canonical_key(const LensParams &L);

/// True iff the sorted, sign-normalized list `s` is its own canonical key mod q.
bool is_canonical(std::int64_t q, std::span<const std::int64_t> s);

bool are_isometric(const LensParams &a, const LensParams &b);

/// Number of congruence-lattice vectors of one-norm k.
BigInt lattice_count(const LensParams &L, std::size_t k);

/// lattice_count(L, k) for every k = 0..K in one pass.
std::vector<BigInt> lattice_counts(const LensParams &L, std::size_t K);

/// The same counts reduced mod a fixed 62-bit prime. Distinct residue vectors
/// prove distinct counts, so these are safe bucket keys.
std::vector<std::uint64_t> lattice_counts_fingerprint(const LensParams &L, std::size_t K);

/// dim H_k = sum_r C(r+n-2, n-2) N(k-2r), evaluated for all k <= K.
std::vector<BigInt> multiplicities_from_counts(std::span<const BigInt> counts, std::size_t n);

BigInt harmonic_invariant_dim(const LensParams &L, std::size_t k);

std::int64_t eigenvalue(std::size_t k, std::size_t n);

/// K = q(n(n-1)+1) - 1: agreement of dim H_k for k <= K forces agreement for all k.
std::size_t isospectral_cutoff(std::int64_t q, std::size_t n);

SpectrumSlice spectrum_slice(const LensParams &L, std::size_t K);

IsospectralDecision decide_isospectral(const LensParams &a,
                                       const LensParams &b,
                                       std::optional<std::size_t> cutoff_override = std::nullopt);

bool are_isospectral(const LensParams &a, const LensParams &b);

/// Brute-force count of invariant monomials: dim P_k^Gamma - dim P_{k-2}^Gamma.
/// Independent of the lattice route; throws PreconditionError past its budget.
BigInt monomial_oracle_dim(const LensParams &L, std::size_t k);

/// Upper limit on (K+1)*q table cells for the residue DP.
inline constexpr std::uint64_t max_table_cells = std::uint64_t{1} << 27;

} // namespace lensspec::lens
