#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lensspec/lens.hpp"

namespace lensspec::orbifold
{

/// Integer polynomial, coefficients from the constant term up.
using Poly = std::vector<BigInt>;

/**
 * Orthogonal matrix with one entry +-1 in every row and column, stored by
 * columns: column j is sign * e_{|image[j]| - 1}, sign = sign of image[j].
 */
class SignedPermMatrix
{
public:
    SignedPermMatrix() = default;
    /// Throws PreconditionError unless |image| is a permutation of 1..m.
    explicit SignedPermMatrix(std::vector<int> image);

    static SignedPermMatrix identity(std::size_t m);
    /// Row-major dense form; throws unless it is a signed permutation.
    static SignedPermMatrix from_dense(const std::vector<std::vector<int>> &rows);

    std::size_t size() const { return image_.size(); }
    const std::vector<int> &image() const { return image_; }
    int entry(std::size_t row, std::size_t col) const;
    std::vector<std::vector<int>> dense() const;

    SignedPermMatrix operator*(const SignedPermMatrix &rhs) const;
    SignedPermMatrix inverse() const;
    int determinant() const;
    long trace() const;
    bool is_identity() const;

    /// det(xI - g) = prod over cycles of length l with sign product e of (x^l - e).
    Poly char_poly() const;

    friend bool operator==(const SignedPermMatrix &, const SignedPermMatrix &) = default;
    friend auto operator<=>(const SignedPermMatrix &, const SignedPermMatrix &) = default;

private:
    std::vector<int> image_;
};

struct FiniteOrthogonalGroup
{
    std::size_t m = 0;
    std::vector<SignedPermMatrix> elements;  // sorted, identity included

    std::size_t order() const { return elements.size(); }
};

/// Sorted multiset of element characteristic polynomials.
using ConjugacyFingerprint = std::vector<Poly>;

FiniteOrthogonalGroup generate_group(const std::vector<SignedPermMatrix> &generators, std::size_t max_order);

/// The two order-4 subgroups of SO(d+1) built from pair-swap blocks.
std::pair<FiniteOrthogonalGroup, FiniteOrthogonalGroup> gassmann_pair(std::size_t d);

ConjugacyFingerprint char_fingerprint(const FiniteOrthogonalGroup &G);

bool almost_conjugate(const FiniteOrthogonalGroup &G1, const FiniteOrthogonalGroup &G2);

/// dim of the common fixed space, the intersection of ker(g - I), by exact rational rank.
std::size_t fixed_space_dim(const FiniteOrthogonalGroup &G);

/// Coordinates e_i fixed by every element. A lower bound for fixed_space_dim.
std::size_t fixed_coordinate_count(const FiniteOrthogonalGroup &G);

enum class Verdict
{
    distinguished,  // not conjugate in O(m)
    conjugate,      // conjugate in O(m), so the quotients are isometric
    undecided,
};

struct Distinction
{
    Verdict verdict = Verdict::undecided;
    std::string reason;
};

/// Orders, fixed spaces and fingerprints first. For orders up to
/// `search_limit` a trace-preserving isomorphism is searched for: one exists
/// iff the two orthogonal representations are equivalent, i.e. conjugate.
Distinction distinguish(const FiniteOrthogonalGroup &G1, const FiniteOrthogonalGroup &G2,
                        std::size_t search_limit = 8);

std::string verdict_name(Verdict v);

/// dim H_k^G for k = 0..K from (1 - z^2)/|G| * sum_g 1/det(I - g z).
std::vector<BigInt> orbifold_spectrum_slice(const FiniteOrthogonalGroup &G, std::size_t K);
/// The same series from characteristic polynomials alone (one per element).
std::vector<BigInt> orbifold_spectrum_slice(const ConjugacyFingerprint &fp, std::size_t K);

/// Element characteristic polynomials of the rotation-block action of L(q; s),
/// available when every block polynomial is integral: q in {1, 2, 3, 4, 6}.
ConjugacyFingerprint lens_fingerprint(const lens::LensParams &L);

/// Subgroups of O(d+1) of order 2 (m = 1..d+1 eigenvalues -1) or order 3
/// (m = 1..(d+1)/2 rotation blocks) up to conjugacy; true iff their spectra
/// pairwise differ for some k <= K.
bool small_order_uniqueness(std::size_t d, int order, std::size_t K);
std::vector<ConjugacyFingerprint> small_order_classes(std::size_t d, int order);

Poly poly_mul(const Poly &a, const Poly &b);
Poly poly_pow(const Poly &a, std::size_t e);
std::string format_poly(const Poly &p);

/// One generator per line, e.g. "(2 -1 | 4 -3 | 5 6)"; '|' is ignored and '#' starts a comment.
std::vector<SignedPermMatrix> parse_generators(std::string_view text);
std::string format_matrix(const SignedPermMatrix &g);

} // namespace lensspec::orbifold
