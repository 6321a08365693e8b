#include "lensspec/eigen_equiv.hpp"

#include <algorithm>

namespace lensspec::eigen
{

namespace
{

BigInt one_norm(const std::vector<BigInt> &v)
{
    BigInt out = 0;
    for (const auto &x : v) {
        out += abs(x);
    }
    return out;
}

bool odd_coordinate_sum(const std::vector<BigInt> &v)
{
    BigInt sum = 0;
    for (const auto &x : v) {
        sum += x;
    }
    return mpz_odd_p(sum.get_mpz_t()) != 0;
}

} // namespace

std::vector<std::vector<BigInt>> lattice_basis(const lens::LensParams &L)
{
    // Column-reduce the row (s_1, ..., s_n, q) to (g, 0, ..., 0). The last n
    // columns of the accumulated unimodular matrix span its integer kernel,
    // and dropping their final coordinate is a bijection onto the lattice.
    const std::size_t n = L.n();
    std::vector<BigInt> row(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        row[i] = L.s[i];
    }
    row[n] = L.q;
    std::vector<std::vector<BigInt>> cols(n + 1, std::vector<BigInt>(n + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) {
        cols[i][i] = 1;
    }
    // Bring the pivot into column 0.
    for (std::size_t j = 1; j <= n; ++j) {
        while (row[j] != 0) {
            const BigInt quot = row[0] / row[j];
            row[0] -= quot * row[j];
            for (std::size_t r = 0; r <= n; ++r) {
                cols[0][r] -= quot * cols[j][r];
            }
            std::swap(row[0], row[j]);
            std::swap(cols[0], cols[j]);
        }
    }
    std::vector<std::vector<BigInt>> basis;
    for (std::size_t j = 1; j <= n; ++j) {
        basis.emplace_back(cols[j].begin(), cols[j].begin() + static_cast<std::ptrdiff_t>(n));
    }
    return basis;
}

std::optional<std::size_t> k0(const lens::LensParams &L)
{
    const lens::LensParams e = L.effective();
    const auto basis = lattice_basis(e);

    // The parity of the one-norm is the parity of the coordinate sum, a
    // homomorphism to Z/2; it is nonzero on the lattice iff it is nonzero on
    // some basis vector. Sums and differences of basis pairs only tighten the
    // search bound.
    std::optional<BigInt> bound;
    auto consider = [&](const std::vector<BigInt> &v) {
        if (odd_coordinate_sum(v)) {
            const BigInt norm = one_norm(v);
            if (!bound || norm < *bound) {
                bound = norm;
            }
        }
    };
    for (std::size_t i = 0; i < basis.size(); ++i) {
        consider(basis[i]);
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            std::vector<BigInt> sum(basis[i]), diff(basis[i]);
            for (std::size_t c = 0; c < sum.size(); ++c) {
                sum[c] += basis[j][c];
                diff[c] -= basis[j][c];
            }
            consider(sum);
            consider(diff);
        }
    }
    if (!bound) {
        return std::nullopt;
    }
    if (!bound->fits_ulong_p()) {
        throw InvariantViolation("k0 search bound does not fit in a machine word");
    }
    const std::size_t limit = bound->get_ui();
    std::size_t K = std::min<std::size_t>(limit, 16);
    while (true) {
        const auto counts = lens::lattice_counts(e, K);
        for (std::size_t k = 1; k <= K; k += 2) {
            if (counts[k] > 0) {
                return k;
            }
        }
        if (K >= limit) {
            throw InvariantViolation("no odd-norm lattice vector below the basis bound");
        }
        K = std::min(limit, 2 * K);
    }
}

EigenvalueSpectrumDescriptor eigenvalue_spectrum(const lens::LensParams &L)
{
    return {L.n(), k0(L)};
}

bool are_eigenvalue_equivalent(const lens::LensParams &a, const lens::LensParams &b)
{
    return eigenvalue_spectrum(a) == eigenvalue_spectrum(b);
}

std::vector<lens::LensParams> eigenvalue_equivalent_family(std::size_t n, std::int64_t qmax)
{
    if (n < 2) {
        throw PreconditionError("family needs n >= 2");
    }
    std::vector<lens::LensParams> out;
    for (std::int64_t q = 3; q <= qmax; ++q) {
        std::vector<std::int64_t> s(n, 1);
        s.back() = 2;
        out.push_back(lens::make_lens(q, std::move(s)));
    }
    return out;
}

mpq_class volume_ratio(const std::vector<lens::LensParams> &family)
{
    if (family.empty()) {
        throw PreconditionError("empty family");
    }
    std::int64_t lo = family.front().effective_order, hi = lo;
    for (const auto &L : family) {
        lo = std::min(lo, L.effective_order);
        hi = std::max(hi, L.effective_order);
    }
    mpq_class ratio(hi, lo);
    ratio.canonicalize();
    return ratio;
}

bool sphere_quarter_vs_projective_check(std::int64_t bound)
{
    std::vector<std::int64_t> sphere, projective;
    for (std::int64_t k = 0; 4 * k * (k + 1) <= bound; ++k) {
        sphere.push_back(4 * k * (k + 1));
    }
    for (std::int64_t k = 0; k * (k + 2) <= bound; k += 2) {
        projective.push_back(k * (k + 2));
    }
    return sphere == projective;
}

FinitePartCertificate finite_part_bound(std::size_t n, const mpq_class &epsilon)
{
    if (n < 2) {
        throw PreconditionError("finite_part_bound needs n >= 2");
    }
    if (epsilon <= 0) {
        throw PreconditionError("epsilon must be positive");
    }
    const mpq_class inv = 1 / epsilon;
    const mpz_class floor_inv = inv.get_num() / inv.get_den();
    if (floor_inv > 8) {
        throw PreconditionError("bound astronomically large: floor(1/epsilon) > 8");
    }
    FinitePartCertificate out;
    out.epsilon = epsilon;
    mpz_fac_ui(out.q.get_mpz_t(), floor_inv.get_ui());
    out.K = out.q * static_cast<unsigned long>(n * (n - 1) + 1);
    // sum_{k <= K} dim H_k telescopes to dim P_K + dim P_{K-1} in 2n variables.
    const unsigned long vars = 2 * n;
    const unsigned long K = out.K.get_ui();
    BigInt top, below;
    mpz_bin_uiui(top.get_mpz_t(), K + vars - 1, vars - 1);
    if (K >= 1) {
        mpz_bin_uiui(below.get_mpz_t(), K - 1 + vars - 1, vars - 1);
    }
    out.N = 1 + top + below;
    return out;
}

std::vector<std::int64_t> first_eigenvalues(const lens::LensParams &L, std::size_t N)
{
    std::vector<std::int64_t> out;
    out.reserve(N);
    std::size_t K = 8;
    while (true) {
        const auto slice = lens::spectrum_slice(L, K);
        out.clear();
        for (std::size_t k = 0; k <= K && out.size() < N; ++k) {
            const auto &m = slice.multiplicities[k];
            for (BigInt c = 0; c < m && out.size() < N; ++c) {
                out.push_back(slice.eigenvalues[k]);
            }
        }
        if (out.size() == N) {
            return out;
        }
        K *= 2;
    }
}

Example54Report example_5_4(std::size_t N)
{
    if (N < 1) {
        throw PreconditionError("example_5_4 needs N >= 1");
    }
    Example54Report out;
    std::int64_t q = 4;
    while (static_cast<std::size_t>(q * (q + 4) / 16) < N) {
        q += 4;
    }
    out.q = q;
    out.L1 = lens::make_lens(q, {0, 1});
    out.L2 = lens::make_lens(q, {0, 2});
    out.promised_prefix = q * (q + 4) / 16;

    // Walk both sorted eigenvalue sequences degree by degree; they coincide
    // until the first k whose multiplicities differ, and then for exactly
    // min(m1, m2) more terms.
    std::size_t K = static_cast<std::size_t>(q);
    while (true) {
        const auto m1 = lens::spectrum_slice(out.L1, K).multiplicities;
        const auto m2 = lens::spectrum_slice(out.L2, K).multiplicities;
        BigInt agreed = 0;
        std::size_t k = 0;
        while (k <= K && m1[k] == m2[k]) {
            agreed += m1[k];
            ++k;
        }
        if (k <= K) {
            out.first_divergent_k = k;
            out.agree_count = agreed + std::min(m1[k], m2[k]);
            break;
        }
        K *= 2;
    }
    out.isospectral = lens::are_isospectral(out.L1, out.L2);
    out.isometric = lens::are_isometric(out.L1, out.L2);
    return out;
}

} // namespace lensspec::eigen
