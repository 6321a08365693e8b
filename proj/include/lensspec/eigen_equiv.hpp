#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lensspec/lens.hpp"

namespace lensspec::eigen
{

/// The eigenvalue set {lambda_{2k}} u {lambda_{k0+2k}}; k0 absent when no odd-norm lattice vector exists.
struct EigenvalueSpectrumDescriptor
{
    std::size_t n = 0;
    std::optional<std::size_t> k0;

    friend bool operator==(const EigenvalueSpectrumDescriptor &, const EigenvalueSpectrumDescriptor &) = default;
};

struct FinitePartCertificate
{
    mpq_class epsilon;
    BigInt q;  // floor(1/epsilon)!
    BigInt K;  // q * (|Phi+| + 1)
    BigInt N;  // 1 + sum_{k <= K} dim H_k(S^{2n-1})
};

struct Example54Report
{
    std::int64_t q = 0;
    lens::LensParams L1;
    lens::LensParams L2;
    BigInt agree_count;
    // sum_{k < q/2} (floor(k/2) + 1) = q(q+4)/16, the prefix length the construction promises.
    BigInt promised_prefix;
    std::size_t first_divergent_k = 0;
    bool isospectral = false;
    bool isometric = false;
};

/// A basis of the congruence lattice {a : sum a_i s_i == 0 mod q}.
std::vector<std::vector<BigInt>> lattice_basis(const lens::LensParams &L);

std::optional<std::size_t> k0(const lens::LensParams &L);

EigenvalueSpectrumDescriptor eigenvalue_spectrum(const lens::LensParams &L);

bool are_eigenvalue_equivalent(const lens::LensParams &a, const lens::LensParams &b);

/// L(q; 1, ..., 1, 2) for 3 <= q <= qmax.
std::vector<lens::LensParams> eigenvalue_equivalent_family(std::size_t n, std::int64_t qmax);

/// max q / min q over a family; the volume ratio of its largest and smallest members.
mpq_class volume_ratio(const std::vector<lens::LensParams> &family);

/// {4k(k+1)} and {k(k+2) : k even} agree as subsets of [0, bound].
bool sphere_quarter_vs_projective_check(std::int64_t bound);

/// Refuses floor(1/epsilon) > 8.
FinitePartCertificate finite_part_bound(std::size_t n, const mpq_class &epsilon);

/// lambda_0 <= lambda_1 <= ... with lambda_k repeated dim H_k times; first N terms.
std::vector<std::int64_t> first_eigenvalues(const lens::LensParams &L, std::size_t N);

Example54Report example_5_4(std::size_t N);

} // namespace lensspec::eigen
