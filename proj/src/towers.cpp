#include "lensspec/towers.hpp"

#include <algorithm>

#include "lensspec/parallel.hpp"

namespace lensspec::towers
{

using modarith::checked_add;
using modarith::checked_mul;
using modarith::mod;

namespace
{

Tuple reduced_sorted(const Tuple &a, std::int64_t r, std::int64_t shift = 0)
{
    Tuple out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = mod(mod(a[i], r) + shift, r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_modulus(std::int64_t r)
{
    if (r < 1) {
        throw PreconditionError("tuple modulus must be positive");
    }
}

std::string format_tuple(const Tuple &a)
{
    std::string out = "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += (i ? "," : "") + std::to_string(a[i]);
    }
    return out + ")";
}

} // namespace

bool is_univalent(const Tuple &a, std::int64_t r)
{
    check_modulus(r);
    const Tuple s = reduced_sorted(a, r);
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_self_reversing(const Tuple &a, std::int64_t r)
{
    check_modulus(r);
    return reduced_sorted(a, r) == reduced_sorted(negate(a, r), r);
}

bool is_reversible(const Tuple &a, std::int64_t r)
{
    check_modulus(r);
    const Tuple target = reduced_sorted(negate(a, r), r);
    for (std::int64_t c = 0; c < r; ++c) {
        if (reduced_sorted(a, r, c) == target) {
            return true;
        }
    }
    return false;
}

bool is_good(const Tuple &a, std::int64_t r)
{
    return is_univalent(a, r) || is_reversible(a, r);
}

bool is_hereditarily_good(const Tuple &a, std::int64_t r)
{
    check_modulus(r);
    const auto ds = modarith::divisors(r);
    return std::all_of(ds.begin(), ds.end(), [&](std::int64_t d) { return is_good(a, d); });
}

bool is_useful(const Tuple &a, std::int64_t r)
{
    return is_hereditarily_good(a, r) && !is_reversible(a, r);
}

Tuple negate(const Tuple &a, std::int64_t r)
{
    check_modulus(r);
    Tuple out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = mod(-mod(a[i], r), r);
    }
    return out;
}

lens::LensParams build_dd_lens(std::int64_t r, std::int64_t t, const Tuple &a)
{
    if (r <= 2 || t < 1) {
        throw PreconditionError("build_dd_lens needs r > 2 and t >= 1");
    }
    const std::int64_t q = checked_mul(checked_mul(r, r), t);
    const std::int64_t rt = checked_mul(r, t);
    std::vector<std::int64_t> s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        s[i] = mod(checked_add(checked_mul(rt, mod(a[i], r)), 1), q);
    }
    return lens::make_lens(q, std::move(s));
}

DdPairReport dd_pair_check(std::int64_t r, std::int64_t t, const Tuple &a, std::optional<std::size_t> cutoff_override)
{
    DdPairReport out;
    out.M = build_dd_lens(r, t, a);
    out.N = build_dd_lens(r, t, negate(a, r));
    const auto decision = lens::decide_isospectral(out.M, out.N, cutoff_override);
    out.isospectral = decision.isospectral;
    out.cutoff = decision.cutoff;
    out.heuristic = decision.heuristic;
    out.isometric = lens::are_isometric(out.M, out.N);
    out.hereditarily_good = is_hereditarily_good(a, r);
    out.reversible = is_reversible(a, r);
    out.consistent = (!out.hereditarily_good || out.isospectral) && (!out.reversible || out.isometric);
    return out;
}

Tuple useful_tuple(std::size_t n, std::int64_t r)
{
    if (n < 3) {
        throw PreconditionError("useful_tuple needs n >= 3");
    }
    const auto nn = static_cast<std::int64_t>(n);
    if (r < 0 || !modarith::is_prime(static_cast<std::uint64_t>(r)) || r <= nn * nn) {
        throw PreconditionError("useful_tuple needs a prime r > n^2");
    }
    Tuple a;
    for (std::int64_t i = 1; i < nn; ++i) {
        a.push_back(i);
    }
    a.push_back(r - nn * (nn - 1) / 2);
    if (!is_useful(a, r)) {
        throw InvariantViolation("useful_tuple produced a tuple that is not useful");
    }
    return a;
}

Tuple shift_to_zero_sum(const Tuple &a, std::int64_t r)
{
    check_modulus(r);
    const auto n = static_cast<std::int64_t>(a.size());
    if (modarith::gcd(n, r) != 1) {
        throw PreconditionError("shift_to_zero_sum needs gcd(n, r) = 1");
    }
    if (!is_useful(a, r)) {
        throw PreconditionError("shift_to_zero_sum needs a useful tuple");
    }
    std::int64_t sum = 0;
    for (const auto x : a) {
        sum = mod(sum + mod(x, r), r);
    }
    // m n == 1 mod r; the shift c = -m * sum then cancels the entry sum.
    const std::int64_t m = r == 1 ? 0 : modarith::inverse(mod(n, r), r);
    const std::int64_t c = mod(-checked_mul(m, sum), r);
    Tuple b(a.size());
    std::int64_t check = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        b[i] = mod(a[i] + c, r);
        check = mod(check + b[i], r);
    }
    if (check != 0 || !is_useful(b, r)) {
        throw InvariantViolation("shifted tuple lost zero sum or usefulness");
    }
    return b;
}

TowerSpec build_tower(std::int64_t r, std::int64_t t, std::int64_t k, const Tuple &a, std::size_t depth)
{
    if (r < 0 || !modarith::is_prime(static_cast<std::uint64_t>(r))) {
        throw PreconditionError("build_tower needs r prime");
    }
    const auto n = static_cast<std::int64_t>(a.size());
    if (r <= n * n) {
        throw PreconditionError("build_tower needs r > n^2");
    }
    if (!is_useful(a, r)) {
        throw PreconditionError("build_tower needs a useful tuple");
    }
    if (k <= 1 || mod(k, r) != 1) {
        throw PreconditionError("build_tower needs k > 1 with k == 1 mod r");
    }
    if (t < 1) {
        throw PreconditionError("build_tower needs t >= 1");
    }
    TowerSpec T;
    T.r = r;
    T.t = t;
    T.k = k;
    T.a = a;
    T.depth = depth;
    std::int64_t tj = t;
    for (std::size_t j = 0; j <= depth; ++j) {
        T.levels.push_back({j, tj, build_dd_lens(r, tj, a), build_dd_lens(r, tj, negate(a, r))});
        if (j < depth) {
            tj = checked_mul(tj, k);
        }
    }
    return T;
}

TowerReport verify_tower(const TowerSpec &T, std::size_t full_check_depth, std::size_t jobs)
{
    TowerReport report;
    const std::int64_t r = T.r;
    const bool predicate = is_hereditarily_good(T.a, r) && !is_reversible(T.a, r);
    const Tuple minus_a = negate(T.a, r);

    struct LevelResult
    {
        LevelChecks checks;
        std::vector<TowerFailure> failures;
    };
    const auto results = parallel_map<LevelResult>(T.levels.size(), jobs, [&](std::size_t idx) {
        LevelResult res;
        const TowerLevel &level = T.levels[idx];
        const std::size_t j = level.j;
        res.checks.j = j;
        res.checks.predicate = predicate;
        if (!predicate) {
            res.failures.push_back({j, "predicate", "tuple " + format_tuple(T.a) + " is not useful mod " + std::to_string(r)});
        }

        res.checks.congruence = true;
        const std::int64_t qj = checked_mul(checked_mul(r, r), level.t_j);
        auto fail = [&](std::string witness) {
            res.checks.congruence = false;
            res.failures.push_back({j, "congruence", std::move(witness)});
        };
        if (level.M != build_dd_lens(r, level.t_j, T.a) || level.N != build_dd_lens(r, level.t_j, minus_a)) {
            fail("level lens spaces differ from L(r, t_j, +-a)");
        }
        for (std::size_t i = idx + 1; i < T.levels.size(); ++i) {
            const std::int64_t ti = T.levels[i].t_j;
            for (const Tuple *tuple : {&T.a, &minus_a}) {
                std::vector<std::int64_t> lifted;
                for (const auto as : *tuple) {
                    const std::int64_t hi = checked_add(checked_mul(checked_mul(r, ti), mod(as, r)), 1);
                    const std::int64_t lo = checked_add(checked_mul(checked_mul(r, level.t_j), mod(as, r)), 1);
                    if (mod(hi - lo, qj) != 0) {
                        fail("i=" + std::to_string(T.levels[i].j) + " a_s=" + std::to_string(as) + ": " +
                             std::to_string(hi) + " != " + std::to_string(lo) + " mod " + std::to_string(qj));
                    }
                    lifted.push_back(hi);
                }
                const auto &target = tuple == &T.a ? level.M : level.N;
                if (!lens::are_isometric(lens::make_lens(qj, lifted), target)) {
                    fail("i=" + std::to_string(T.levels[i].j) + ": lifted parameters not isometric to level " +
                         std::to_string(j));
                }
            }
        }

        if (j <= full_check_depth) {
            const auto decision = lens::decide_isospectral(level.M, level.N);
            const bool isometric = lens::are_isometric(level.M, level.N);
            res.checks.full = decision.isospectral && !isometric;
            res.checks.full_cutoff = decision.cutoff;
            if (!*res.checks.full) {
                res.failures.push_back({j, "full", decision.isospectral ? "pair is isometric" : decision.reason});
            }
        }
        return res;
    });
    for (const auto &res : results) {
        report.levels.push_back(res.checks);
        report.failures.insert(report.failures.end(), res.failures.begin(), res.failures.end());
    }
    report.ok = report.failures.empty();
    return report;
}

} // namespace lensspec::towers
