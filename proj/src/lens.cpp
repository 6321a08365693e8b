#include "lensspec/lens.hpp"

#include <algorithm>
#include <numeric>

namespace lensspec::lens
{

using modarith::normalize_sign;

namespace
{

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t q)
{
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
}

void sorted_scaled(std::int64_t q, std::span<const std::int64_t> s, std::int64_t t, std::vector<std::int64_t> &out)
{
    out.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out[i] = normalize_sign(mul_mod(t, s[i], q), q);
    }
    std::sort(out.begin(), out.end());
}

// 2^n * C(K+n-1, n-1) bounds the number of vectors of Z^n with one-norm k <= K.
BigInt count_bound(std::size_t n, std::size_t K)
{
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), K + n - 1, n - 1);
    BigInt bound = binom;
    bound <<= n;
    return bound;
}

std::size_t primes_needed(const BigInt &bound)
{
    // Every CRT prime exceeds 2^61, so m primes cover any value below 2^(61m).
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    return bits / 61 + 1;
}

/**
 * Counts of congruence-lattice vectors by one-norm, reduced mod p.
 *
 * table[d*q + r] holds the number of partial vectors with one-norm d whose
 * weighted sum is r mod q. Adding a coordinate with weight w multiplies the
 * generating series by sum_a x^|a| w^a = (1 - x^2) / ((1 - x w)(1 - x w^-1));
 * each denominator factor is an in-place prefix recurrence over d.
 */
std::vector<std::uint64_t> counts_mod_prime(std::int64_t q,
                                            std::span<const std::int64_t> s,
                                            std::size_t K,
                                            std::uint64_t p,
                                            std::vector<std::uint64_t> &table)
{
    const auto uq = static_cast<std::size_t>(q);
    table.assign((K + 1) * uq, 0);
    table[0] = 1;
    auto add = [p](std::uint64_t a, std::uint64_t b) {
        const std::uint64_t c = a + b;
        return c >= p ? c - p : c;
    };
    auto shift_pass = [&](std::size_t shift) {
        for (std::size_t d = 1; d <= K; ++d) {
            std::uint64_t *cur = table.data() + d * uq;
            const std::uint64_t *prev = cur - uq;
            // cur[r] += prev[r - shift mod q]
            for (std::size_t r = shift; r < uq; ++r) {
                cur[r] = add(cur[r], prev[r - shift]);
            }
            for (std::size_t r = 0; r < shift; ++r) {
                cur[r] = add(cur[r], prev[r + uq - shift]);
            }
        }
    };
    for (const std::int64_t w : s) {
        const auto shift = static_cast<std::size_t>(modarith::mod(w, q));
        shift_pass(shift);
        shift_pass(shift == 0 ? 0 : uq - shift);
        for (std::size_t d = K; d >= 2; --d) {
            std::uint64_t *cur = table.data() + d * uq;
            const std::uint64_t *prev2 = cur - 2 * uq;
            for (std::size_t r = 0; r < uq; ++r) {
                cur[r] = add(cur[r], p - prev2[r]);
            }
        }
    }
    std::vector<std::uint64_t> out(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        out[k] = table[k * uq];
    }
    return out;
}

void check_table_size(std::int64_t q, std::size_t K)
{
    const auto cells = static_cast<unsigned __int128>(K + 1) * static_cast<unsigned __int128>(q);
    if (cells > max_table_cells) {
        throw PreconditionError("cutoff " + std::to_string(K) + " with modulus " + std::to_string(q) +
                                " exceeds the lattice-count table budget");
    }
}

BigInt from_u64(std::uint64_t v)
{
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof v, 0, 0, &v);
    return out;
}

} // namespace

LensParams LensParams::effective() const
{
    const std::int64_t g = q / effective_order;
    std::vector<std::int64_t> reduced(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        reduced[i] = modarith::mod(s[i] / g, effective_order);
    }
    return make_lens(effective_order, std::move(reduced));
}

LensParams make_lens(std::int64_t q, std::vector<std::int64_t> s)
{
    if (q < 1) {
        throw PreconditionError("lens modulus must be positive");
    }
    if (s.size() < 2) {
        throw PreconditionError("dimension below 3 unsupported");
    }
    LensParams L;
    L.q = q;
    std::int64_t g = q;
    L.manifold = true;
    for (auto &x : s) {
        x = modarith::mod(x, q);
        g = std::gcd(g, x);
        if (std::gcd(q, x) != 1) {
            L.manifold = false;
        }
    }
    L.s = std::move(s);
    L.effective_order = q / g;
    return L;
}

IsometryClassKey canonical_key(const LensParams &L)
{
    std::vector<std::int64_t> best, cand;
    sorted_scaled(L.q, L.s, 1, best);
    for (const std::int64_t t : modarith::half_units(L.q)) {
        if (t == 1) {
            continue;
        }
        sorted_scaled(L.q, L.s, t, cand);
        if (cand < best) {
            best.swap(cand);
        }
    }
    return {L.q, std::move(best)};
}

bool is_canonical(std::int64_t q, std::span<const std::int64_t> s)
{
    std::vector<std::int64_t> cand;
    const std::vector<std::int64_t> base(s.begin(), s.end());
    for (const std::int64_t t : modarith::half_units(q)) {
        if (t == 1) {
            continue;
        }
        sorted_scaled(q, s, t, cand);
        if (cand < base) {
            return false;
        }
    }
    return true;
}

bool are_isometric(const LensParams &a, const LensParams &b)
{
    if (a.n() != b.n() || a.effective_order != b.effective_order) {
        return false;
    }
    if (a.q == b.q) {
        return canonical_key(a) == canonical_key(b);
    }
    return canonical_key(a.effective()) == canonical_key(b.effective());
}

std::vector<BigInt> lattice_counts(const LensParams &L, std::size_t K)
{
    const LensParams e = L.effective();
    check_table_size(e.q, K);
    const auto primes = modarith::crt_primes(primes_needed(count_bound(e.n(), K)));

    std::vector<std::uint64_t> table;
    std::vector<BigInt> value(K + 1), modulus_so_far(K + 1);
    BigInt modulus = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        const auto residues = counts_mod_prime(e.q, e.s, K, p, table);
        if (i == 0) {
            for (std::size_t k = 0; k <= K; ++k) {
                value[k] = from_u64(residues[k]);
            }
            modulus = from_u64(p);
            continue;
        }
        // Garner step: value += modulus * ((r - value) * modulus^-1 mod p)
        const BigInt bp = from_u64(p);
        BigInt inv;
        BigInt mp = modulus % bp;
        mpz_invert(inv.get_mpz_t(), mp.get_mpz_t(), bp.get_mpz_t());
        for (std::size_t k = 0; k <= K; ++k) {
            BigInt diff = from_u64(residues[k]) - value[k] % bp;
            diff = diff * inv % bp;
            if (diff < 0) {
                diff += bp;
            }
            value[k] += modulus * diff;
        }
        modulus *= bp;
    }
    return value;
}

BigInt lattice_count(const LensParams &L, std::size_t k)
{
    return lattice_counts(L, k)[k];
}

std::vector<std::uint64_t> lattice_counts_fingerprint(const LensParams &L, std::size_t K)
{
    const LensParams e = L.effective();
    check_table_size(e.q, K);
    std::vector<std::uint64_t> table;
    return counts_mod_prime(e.q, e.s, K, modarith::crt_primes(1)[0], table);
}

std::vector<BigInt> multiplicities_from_counts(std::span<const BigInt> counts, std::size_t n)
{
    // Multiplying the lattice theta series by (1 - z^2)^-(n-1) expands to the binomial sum.
    std::vector<BigInt> out(counts.begin(), counts.end());
    for (std::size_t pass = 0; pass + 1 < n; ++pass) {
        for (std::size_t k = 2; k < out.size(); ++k) {
            out[k] += out[k - 2];
        }
    }
    return out;
}

BigInt harmonic_invariant_dim(const LensParams &L, std::size_t k)
{
    return multiplicities_from_counts(lattice_counts(L, k), L.n())[k];
}

std::int64_t eigenvalue(std::size_t k, std::size_t n)
{
    const auto kk = static_cast<std::int64_t>(k);
    return modarith::checked_mul(kk, kk + 2 * static_cast<std::int64_t>(n) - 2);
}

std::size_t isospectral_cutoff(std::int64_t q, std::size_t n)
{
    if (q < 1 || n < 2) {
        throw PreconditionError("isospectral_cutoff needs q >= 1 and n >= 2");
    }
    const auto positive_roots = static_cast<std::int64_t>(n * (n - 1));
    return static_cast<std::size_t>(modarith::checked_mul(q, positive_roots + 1) - 1);
}

SpectrumSlice spectrum_slice(const LensParams &L, std::size_t K)
{
    SpectrumSlice out;
    out.q = L.q;
    out.n = L.n();
    out.K = K;
    out.lattice_counts = lattice_counts(L, K);
    out.multiplicities = multiplicities_from_counts(out.lattice_counts, out.n);
    out.eigenvalues.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        out.eigenvalues[k] = eigenvalue(k, out.n);
    }
    return out;
}

IsospectralDecision decide_isospectral(const LensParams &a,
                                       const LensParams &b,
                                       std::optional<std::size_t> cutoff_override)
{
    IsospectralDecision out;
    if (a.n() != b.n()) {
        out.reason = "dimensions differ";
        return out;
    }
    if (a.effective_order != b.effective_order) {
        // Isospectral quotients have equal volume, hence equal group order.
        out.reason = "group orders differ";
        return out;
    }
    const LensParams ea = a.effective();
    const LensParams eb = b.effective();
    const std::size_t certified = isospectral_cutoff(ea.q, ea.n());
    out.cutoff = cutoff_override.value_or(certified);
    out.heuristic = out.cutoff < certified;
    check_table_size(ea.q, out.cutoff);

    // The multiplicities up to K are a unitriangular image of the lattice
    // counts up to K, so comparing counts decides the same question. Counts
    // are compared prime by prime: any residue mismatch proves a difference,
    // and agreement modulo primes whose product exceeds every possible count
    // proves equality.
    const auto primes = modarith::crt_primes(primes_needed(count_bound(ea.n(), out.cutoff)));
    std::vector<std::uint64_t> table;
    for (const std::uint64_t p : primes) {
        const auto ra = counts_mod_prime(ea.q, ea.s, out.cutoff, p, table);
        const auto rb = counts_mod_prime(eb.q, eb.s, out.cutoff, p, table);
        const auto mismatch = std::mismatch(ra.begin(), ra.end(), rb.begin());
        if (mismatch.first != ra.end()) {
            out.reason = "multiplicities differ at k = " + std::to_string(mismatch.first - ra.begin());
            return out;
        }
    }
    out.isospectral = true;
    out.reason = out.heuristic ? "agree below a cutoff under the certified bound" : "agree up to the certified cutoff";
    return out;
}

bool are_isospectral(const LensParams &a, const LensParams &b)
{
    return decide_isospectral(a, b).isospectral;
}

namespace
{

// Monomials z^alpha zbar^beta of total degree k with sum (alpha_i - beta_i) s_i == 0 mod q.
std::uint64_t count_invariant_monomials(std::int64_t q, const std::vector<std::int64_t> &weights, std::size_t k)
{
    std::uint64_t total = 0;
    auto rec = [&](auto &&self, std::size_t idx, std::size_t remaining, std::int64_t residue) -> void {
        if (idx + 1 == weights.size()) {
            const std::int64_t last = modarith::mod(residue + static_cast<std::int64_t>(remaining) * weights[idx], q);
            total += last == 0 ? 1 : 0;
            return;
        }
        for (std::size_t e = 0; e <= remaining; ++e) {
            self(self, idx + 1, remaining - e, modarith::mod(residue + static_cast<std::int64_t>(e) * weights[idx], q));
        }
    };
    rec(rec, 0, k, 0);
    return total;
}

} // namespace

BigInt monomial_oracle_dim(const LensParams &L, std::size_t k)
{
    const std::size_t vars = 2 * L.n();
    BigInt monomials;
    mpz_bin_uiui(monomials.get_mpz_t(), k + vars - 1, vars - 1);
    if (monomials > 100'000'000) {
        throw PreconditionError("oracle budget exceeded");
    }
    std::vector<std::int64_t> weights;
    for (const auto x : L.s) {
        weights.push_back(x);
    }
    for (const auto x : L.s) {
        weights.push_back(modarith::mod(-x, L.q));
    }
    const std::uint64_t top = count_invariant_monomials(L.q, weights, k);
    const std::uint64_t below = k >= 2 ? count_invariant_monomials(L.q, weights, k - 2) : 0;
    return from_u64(top) - from_u64(below);
}

} // namespace lensspec::lens
