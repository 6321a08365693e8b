#include "lensspec/modarith.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <numeric>
#include <utility>

namespace lensspec::modarith
{

Residue::Residue(std::int64_t x, std::int64_t q) : value(mod(x, q)), modulus(q)
{
    if (q < 1) {
        throw PreconditionError("residue modulus must be positive");
    }
}

std::int64_t mod(std::int64_t x, std::int64_t q)
{
    if (q < 1) {
        throw PreconditionError("modulus must be positive");
    }
    const std::int64_t r = x % q;
    return r < 0 ? r + q : r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw PreconditionError("integer overflow in modulus arithmetic");
    }
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw PreconditionError("integer overflow in modulus arithmetic");
    }
    return out;
}

std::int64_t inverse(std::int64_t a, std::int64_t q)
{
    if (q == 1) {
        return 0;
    }
    std::int64_t old_r = mod(a, q), r = q;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        old_r = std::exchange(r, old_r - quot * r);
        old_s = std::exchange(s, old_s - quot * s);
    }
    if (old_r != 1) {
        throw PreconditionError("not invertible mod " + std::to_string(q));
    }
    return mod(old_s, q);
}

std::int64_t totient(std::int64_t q)
{
    if (q < 1) {
        throw PreconditionError("totient needs q >= 1");
    }
    std::int64_t result = q;
    std::int64_t m = q;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) {
                m /= p;
            }
            result -= result / p;
        }
    }
    if (m > 1) {
        result -= result / m;
    }
    return result;
}

UnitRepresentatives unit_representatives(std::int64_t q)
{
    if (q < 3) {
        throw PreconditionError("unit representatives undefined for q < 3");
    }
    return {q, half_units(q)};
}

std::int64_t normalize_sign(std::int64_t x, std::int64_t q)
{
    const std::int64_t r = mod(x, q);
    return std::min(r, q - r);
}

std::vector<std::int64_t> divisors(std::int64_t q)
{
    if (q < 1) {
        throw PreconditionError("divisors needs q >= 1");
    }
    std::vector<std::int64_t> small, large;
    for (std::int64_t d = 1; d * d <= q; ++d) {
        if (q % d == 0) {
            small.push_back(d);
            if (d != q / d) {
                large.push_back(q / d);
            }
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::vector<std::int64_t> half_units(std::int64_t q)
{
    if (q <= 2) {
        return {1};
    }
    std::vector<std::int64_t> out;
    for (std::int64_t t = 1; 2 * t <= q; ++t) {
        if (std::gcd(t, q) == 1) {
            out.push_back(t);
        }
    }
    return out;
}

namespace
{

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) {
            return n == p;
        }
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are a proven witness set below 3.3e24.
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

std::vector<std::uint64_t> crt_primes(std::size_t count)
{
    static std::mutex guard;
    static std::vector<std::uint64_t> primes;
    std::lock_guard lock(guard);
    std::uint64_t candidate = primes.empty() ? (1ULL << 62) - 1 : primes.back() - 2;
    while (primes.size() < count) {
        if (is_prime(candidate)) {
            primes.push_back(candidate);
        }
        candidate -= 2;
    }
    return {primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(count)};
}

} // namespace lensspec::modarith
