#include <doctest.h>

#include <lensspec/orbifold.hpp>

#include "oracles.hpp"

using namespace lensspec;
using namespace lensspec::orbifold;

namespace
{

mpz_class eval(const Poly &p, long x)
{
    mpz_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<std::vector<int>> matmul(const std::vector<std::vector<int>> &a, const std::vector<std::vector<int>> &b)
{
    const std::size_t n = a.size();
    std::vector<std::vector<int>> c(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

// dim of the fixed space = average trace (multiplicity of the trivial character).
mpq_class average_trace(const FiniteOrthogonalGroup &G)
{
    mpq_class sum = 0;
    for (const auto &g : G.elements) {
        sum += g.trace();
    }
    return sum / static_cast<long>(G.order());
}

mpz_class sphere_harmonics(long k, long d)
{
    return oracle::binom(k + d, d) - oracle::binom(k + d - 2, d);
}

const std::vector<std::vector<int>> sample_images{
    {2, -1, 3, 4},
    {-3, 1, -2, 4},
    {1, 2, 3, -4},
    {4, 3, 2, 1},
    {-2, -3, -4, -1},
    {2, 3, 1, -5, 4, 6},
};

} // namespace

TEST_SUITE("orbifold")
{
    TEST_CASE("signed permutation algebra matches dense matrices")
    {
        for (const auto &ia : sample_images) {
            const SignedPermMatrix a(ia);
            CHECK(SignedPermMatrix::from_dense(a.dense()) == a);
            CHECK((a * a.inverse()).is_identity());
            const long det = oracle::bareiss_det([&] {
                std::vector<std::vector<mpz_class>> m;
                for (const auto &row : a.dense()) {
                    m.emplace_back(row.begin(), row.end());
                }
                return m;
            }()).get_si();
            CHECK(a.determinant() == det);
            const auto cp = a.char_poly();
            REQUIRE(cp.size() == a.size() + 1);
            for (long x = -3; x <= 3; ++x) {
                CHECK(eval(cp, x) == oracle::char_poly_at(a.dense(), x));
            }
            long tr = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                tr += a.entry(i, i);
            }
            CHECK(a.trace() == tr);
            for (const auto &ib : sample_images) {
                if (ib.size() != ia.size()) {
                    continue;
                }
                const SignedPermMatrix b(ib);
                CHECK((a * b).dense() == matmul(a.dense(), b.dense()));
            }
        }
        CHECK_THROWS_AS(SignedPermMatrix({1, 1}), PreconditionError);
        CHECK_THROWS_AS(SignedPermMatrix::from_dense({{1, 1}, {0, 1}}), PreconditionError);
    }

    TEST_CASE("group generation")
    {
        const auto C3 = generate_group({SignedPermMatrix({2, 3, 1, 4})}, 10);
        CHECK(C3.order() == 3);
        // signed permutations of 3 letters: the hyperoctahedral group of order 48
        const auto B3 = generate_group({SignedPermMatrix({2, 1, 3}), SignedPermMatrix({2, 3, 1}), SignedPermMatrix({-1, 2, 3})}, 100);
        CHECK(B3.order() == 48);
        CHECK_THROWS_AS(generate_group({SignedPermMatrix({2, 1, 3}), SignedPermMatrix({2, 3, 1}), SignedPermMatrix({-1, 2, 3})}, 47),
                        PreconditionError);
        CHECK(average_trace(B3) == 0);
    }

    TEST_CASE("almost conjugate pair")
    {
        for (std::size_t d = 5; d <= 9; ++d) {
            const auto [G1, G2] = gassmann_pair(d);
            CHECK(G1.order() == 4);
            CHECK(G2.order() == 4);
            CHECK(almost_conjugate(G1, G2));
            for (const auto &g : G1.elements) {
                CHECK(g.determinant() == 1);
            }
            CHECK(mpq_class(fixed_space_dim(G1)) == average_trace(G1));
            CHECK(mpq_class(fixed_space_dim(G2)) == average_trace(G2));
            CHECK(fixed_coordinate_count(G1) == d - 3);
            CHECK(fixed_coordinate_count(G2) == d - 5);
            CHECK(orbifold_spectrum_slice(G1, 30) == orbifold_spectrum_slice(G2, 30));
            CHECK(distinguish(G1, G2).verdict == Verdict::conjugate);
        }
        CHECK_THROWS_AS(gassmann_pair(4), PreconditionError);
    }

    TEST_CASE("distinguishing groups")
    {
        const auto trivial = generate_group({SignedPermMatrix::identity(4)}, 4);
        const auto antipodal = generate_group({SignedPermMatrix({-1, -2, -3, -4})}, 4);
        const auto swap = generate_group({SignedPermMatrix({-1, -2, 3, 4})}, 4);
        CHECK(distinguish(antipodal, swap).verdict == Verdict::distinguished);
        CHECK(distinguish(trivial, antipodal).verdict == Verdict::distinguished);
        CHECK(distinguish(swap, generate_group({SignedPermMatrix({1, -2, -3, 4})}, 4)).verdict == Verdict::conjugate);
        CHECK(verdict_name(Verdict::undecided) == "undecided");
    }

    TEST_CASE("spectrum slices of known quotients")
    {
        const auto trivial = generate_group({SignedPermMatrix::identity(4)}, 4);
        const auto antipodal = generate_group({SignedPermMatrix({-1, -2, -3, -4})}, 4);
        CHECK(orbifold_spectrum_slice(trivial, 3) == std::vector<BigInt>{1, 4, 9, 16});
        CHECK(orbifold_spectrum_slice(antipodal, 3) == std::vector<BigInt>{1, 0, 9, 0});
        for (const long d : {2L, 4L, 6L}) {
            const auto G = generate_group({SignedPermMatrix::identity(static_cast<std::size_t>(d + 1))}, 2);
            const auto slice = orbifold_spectrum_slice(G, 25);
            for (long k = 0; k <= 25; ++k) {
                CHECK(slice[static_cast<std::size_t>(k)] == sphere_harmonics(k, d));
            }
        }
        // reflection quotient: harmonics even in one coordinate
        const auto refl = generate_group({SignedPermMatrix({-1, 2, 3})}, 2);
        const auto rs = orbifold_spectrum_slice(refl, 10);
        for (long k = 0; k <= 10; ++k) {
            CHECK(rs[static_cast<std::size_t>(k)] == k + 1);
        }
    }

    TEST_CASE("lens fingerprints agree with lattice counts")
    {
        const std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> cases{
            {1, {0, 0}}, {2, {1, 1, 1}}, {3, {1, 1}}, {3, {1, 2, 1}}, {4, {1, 3}}, {4, {1, 1, 2}},
            {6, {1, 5, 1}}, {6, {1, 2, 3}}, {6, {2, 3}}};
        for (const auto &[q, s] : cases) {
            const auto L = lens::make_lens(q, s);
            CHECK(orbifold_spectrum_slice(lens_fingerprint(L), 30) == lens::spectrum_slice(L, 30).multiplicities);
        }
        CHECK_THROWS_AS(lens_fingerprint(lens::make_lens(5, {1, 2})), PreconditionError);
    }

    TEST_CASE("small order classes")
    {
        CHECK(small_order_classes(5, 2).size() == 6);
        CHECK(small_order_classes(5, 3).size() == 3);
        // a coordinate 3-cycle realizes the one-block order-3 class
        const auto C3 = generate_group({SignedPermMatrix({2, 3, 1, 4, 5, 6})}, 3);
        CHECK(char_fingerprint(C3) == small_order_classes(5, 3)[0]);
        const auto C2 = generate_group({SignedPermMatrix({-1, -2, 3, 4, 5, 6})}, 2);
        CHECK(char_fingerprint(C2) == small_order_classes(5, 2)[1]);
        CHECK(orbifold_spectrum_slice(C2, 20) == orbifold_spectrum_slice(small_order_classes(5, 2)[1], 20));
        for (std::size_t d = 5; d <= 6; ++d) {
            CHECK(small_order_uniqueness(d, 2, 20));
            CHECK(small_order_uniqueness(d, 3, 20));
        }
        CHECK_THROWS_AS(small_order_classes(5, 4), PreconditionError);
    }

    TEST_CASE("polynomial helpers")
    {
        const Poly a{-1, 1};  // x - 1
        CHECK(poly_pow(a, 3) == Poly{-1, 3, -3, 1});
        CHECK(poly_mul(a, Poly{1, 1}) == Poly{-1, 0, 1});
        CHECK(format_poly(Poly{-1, 0, 1}) == "x^2 - 1");
    }

    TEST_CASE("generator files")
    {
        const auto gens = parse_generators("# comment\n(2 -1 | 4 -3 | 5 6)\n\n(1 2 3 4 -5 -6)  # tail\n");
        REQUIRE(gens.size() == 2);
        CHECK(gens[0].image() == std::vector<int>{2, -1, 4, -3, 5, 6});
        CHECK(format_matrix(gens[0]) == "(2 -1 | 4 -3 | 5 6)");
        CHECK(parse_generators(format_matrix(gens[1]))[0] == gens[1]);
        CHECK_THROWS_AS(parse_generators("(1 2 x)"), ParseError);
        CHECK_THROWS_AS(parse_generators("(1 2 3)\n(1 2)"), PreconditionError);
    }
}
