#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lensspec
{

// Arbitrary-precision integer used for every count that can grow with the
// cutoff (lattice counts, multiplicities, class totals).
using BigInt = mpz_class;

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (lens literals, group files, rationals).
class ParseError : public PreconditionError
{
public:
    using PreconditionError::PreconditionError;
};

/// Raised when an internal consistency check fails. Always a bug.
class InvariantViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

namespace modarith
{

/// Element of Z_q, kept reduced.
struct Residue
{
    std::int64_t value = 0;
    std::int64_t modulus = 1;

    Residue() = default;
    Residue(std::int64_t x, std::int64_t q);

    friend bool operator==(const Residue &, const Residue &) = default;
};

/// t(q): the smallest positive member of each {t, -t} pair of units mod q.
struct UnitRepresentatives
{
    std::int64_t q = 0;
    std::vector<std::int64_t> reps;
};

std::int64_t mod(std::int64_t x, std::int64_t q);
std::int64_t gcd(std::int64_t a, std::int64_t b);

// Overflow-checked products; moduli grow multiplicatively along towers.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

/// Inverse of a mod q; throws PreconditionError if gcd(a,q) != 1.
std::int64_t inverse(std::int64_t a, std::int64_t q);

std::int64_t totient(std::int64_t q);

/// Throws PreconditionError for q < 3 (phi(q) is odd for q in {1,2}).
UnitRepresentatives unit_representatives(std::int64_t q);

/// min(x mod q, q - x mod q), the canonical representative of {x, -x}.
std::int64_t normalize_sign(std::int64_t x, std::int64_t q);

std::vector<std::int64_t> divisors(std::int64_t q);

/// Units t with 1 <= t <= q/2 (t = 1 alone for q <= 2).
std::vector<std::int64_t> half_units(std::int64_t q);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// `count` distinct primes just below 2^62, largest first.
std::vector<std::uint64_t> crt_primes(std::size_t count);

} // namespace modarith
} // namespace lensspec
