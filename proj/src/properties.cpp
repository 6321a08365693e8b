#include "lensspec/properties.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "lensspec/lens.hpp"
#include "lensspec/orbifold.hpp"
#include "lensspec/serialize.hpp"
#include "lensspec/towers.hpp"

namespace lensspec::properties
{

namespace
{

std::int64_t pick(std::mt19937_64 &rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::vector<std::int64_t> random_params(std::mt19937_64 &rng, std::int64_t q, std::size_t n, bool units_only)
{
    while (true) {
        std::vector<std::int64_t> s(n);
        std::int64_t g = q;
        bool ok = true;
        for (auto &x : s) {
            x = pick(rng, 0, q - 1);
            g = std::gcd(g, x);
            ok = ok && (!units_only || std::gcd(x, q) == 1);
        }
        if (ok && (g == 1 || q == 1)) {
            return s;
        }
    }
}

std::string tuple_text(const towers::Tuple &a, std::int64_t r)
{
    std::ostringstream out;
    out << "a=(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out << (i ? "," : "") << a[i];
    }
    out << ") r=" << r;
    return out.str();
}

void record(PropertyResult &res, bool ok, const std::string &witness)
{
    ++res.cases;
    if (!ok) {
        if (res.failures++ == 0) {
            res.counterexample = witness;
        }
    }
}

} // namespace

PropertyResult oracle_agreement(std::uint64_t seed, std::size_t cases)
{
    PropertyResult res{"oracle agreement", 0, 0, {}};
    std::mt19937_64 rng(seed);
    while (res.cases < cases) {
        const auto q = pick(rng, 1, 40);
        const auto n = static_cast<std::size_t>(pick(rng, 2, 4));
        const auto L = lens::make_lens(q, random_params(rng, q, n, false));
        const auto k = static_cast<std::size_t>(pick(rng, 0, n == 4 ? 12 : 20));
        record(res, lens::harmonic_invariant_dim(L, k) == lens::monomial_oracle_dim(L, k),
               format_lens(L) + " k=" + std::to_string(k));
    }
    return res;
}

PropertyResult key_invariance(std::uint64_t seed, std::size_t cases)
{
    PropertyResult res{"canonical key invariance", 0, 0, {}};
    std::mt19937_64 rng(seed);
    while (res.cases < cases) {
        const auto q = pick(rng, 3, 80);
        const auto n = static_cast<std::size_t>(pick(rng, 2, 7));
        const auto s = random_params(rng, q, n, res.cases % 2 == 0);
        std::int64_t t = 0;
        do {
            t = pick(rng, 1, q - 1);
        } while (std::gcd(t, q) != 1);
        std::vector<std::int64_t> image(n);
        for (std::size_t i = 0; i < n; ++i) {
            image[i] = t * s[i] * (pick(rng, 0, 1) ? 1 : -1);
        }
        std::shuffle(image.begin(), image.end(), rng);
        const auto a = lens::make_lens(q, s);
        const auto b = lens::make_lens(q, image);
        record(res, lens::canonical_key(a) == lens::canonical_key(b) && lens::are_isometric(a, b),
               format_lens(a) + " vs " + format_lens(b));
    }
    return res;
}

PropertyResult reversible_iff_isometric(std::uint64_t seed, std::size_t cases)
{
    PropertyResult res{"reversible iff isometric", 0, 0, {}};
    std::mt19937_64 rng(seed);
    while (res.cases < cases) {
        const auto r = pick(rng, 3, 25);
        const auto t = pick(rng, 1, 4);
        towers::Tuple a(static_cast<std::size_t>(pick(rng, 2, 5)));
        for (auto &x : a) {
            x = pick(rng, 0, r - 1);
        }
        if (res.cases % 3 == 0) {
            // a_1 + c == -a_0: reversible by construction
            a.resize(2);
            a[1] = modarith::mod(-a[0] - pick(rng, 0, r - 1), r);
        }
        const bool rev = towers::is_reversible(a, r);
        const bool iso = lens::are_isometric(towers::build_dd_lens(r, t, a), towers::build_dd_lens(r, t, towers::negate(a, r)));
        record(res, rev == iso, tuple_text(a, r) + " t=" + std::to_string(t));
    }
    return res;
}

PropertyResult zero_sum_irreversible(std::uint64_t seed, std::size_t cases)
{
    PropertyResult res{"zero-sum tuples are irreversible", 0, 0, {}};
    std::mt19937_64 rng(seed);
    while (res.cases < cases) {
        const auto n = pick(rng, 3, 8);
        const auto r = pick(rng, 3, 60);
        if (std::gcd(n, r) != 1) {
            continue;
        }
        towers::Tuple a(static_cast<std::size_t>(n));
        std::int64_t sum = 0;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
            a[i] = pick(rng, 0, r - 1);
            sum += a[i];
        }
        a.back() = modarith::mod(-sum, r);
        if (towers::is_self_reversing(a, r)) {
            continue;
        }
        record(res, !towers::is_reversible(a, r), tuple_text(a, r));
    }
    return res;
}

PropertyResult hereditarily_good_isospectral(std::uint64_t seed, std::size_t cases)
{
    PropertyResult res{"hereditarily good implies isospectral", 0, 0, {}};
    std::mt19937_64 rng(seed);
    while (res.cases < cases) {
        const auto r = pick(rng, 3, 13);
        const auto t = pick(rng, 1, 2);
        towers::Tuple a(static_cast<std::size_t>(pick(rng, 2, 3)));
        for (auto &x : a) {
            x = pick(rng, 0, r - 1);
        }
        if (!towers::is_hereditarily_good(a, r)) {
            continue;
        }
        const auto rep = towers::dd_pair_check(r, t, a);
        record(res, rep.isospectral && !rep.heuristic && rep.consistent, tuple_text(a, r) + " t=" + std::to_string(t));
    }
    return res;
}

PropertyResult lens_orbifold_agreement(std::uint64_t seed, std::size_t cases)
{
    PropertyResult res{"lens vs orbifold spectra", 0, 0, {}};
    std::mt19937_64 rng(seed);
    const std::int64_t orders[] = {1, 2, 3, 4, 6};
    while (res.cases < cases) {
        const auto q = orders[pick(rng, 0, 4)];
        const auto n = static_cast<std::size_t>(pick(rng, 2, 6));
        const auto L = lens::make_lens(q, random_params(rng, q, n, false));
        const std::size_t K = 40;
        record(res,
               orbifold::orbifold_spectrum_slice(orbifold::lens_fingerprint(L), K) ==
                   lens::spectrum_slice(L, K).multiplicities,
               format_lens(L));
    }
    return res;
}

std::vector<PropertyResult> run_all(std::uint64_t seed, std::size_t cases)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::vector<std::uint64_t> seeds(6);
    seq.generate(seeds.begin(), seeds.end());
    return {
        oracle_agreement(seeds[0], cases),
        key_invariance(seeds[1], cases),
        reversible_iff_isometric(seeds[2], cases),
        zero_sum_irreversible(seeds[3], cases),
        hereditarily_good_isospectral(seeds[4], cases),
        lens_orbifold_agreement(seeds[5], cases),
    };
}

} // namespace lensspec::properties
