#include "lensspec/orbifold.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>

namespace lensspec::orbifold
{

namespace
{

int sign_of(int v)
{
    return v < 0 ? -1 : 1;
}

std::size_t index_of(int v)
{
    return static_cast<std::size_t>(std::abs(v)) - 1;
}

// Product of disjoint transpositions (0-based coordinate pairs) on R^m.
SignedPermMatrix pair_swaps(std::size_t m, const std::vector<std::pair<int, int>> &swaps)
{
    std::vector<int> image(m);
    std::iota(image.begin(), image.end(), 1);
    for (const auto &[a, b] : swaps) {
        image[static_cast<std::size_t>(a)] = b + 1;
        image[static_cast<std::size_t>(b)] = a + 1;
    }
    return SignedPermMatrix(std::move(image));
}

std::size_t rational_rank(std::vector<std::vector<mpq_class>> rows, std::size_t cols)
{
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) {
                continue;
            }
            const mpq_class factor = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) {
                rows[r][k] -= factor * rows[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

Poly x_minus(int root, std::size_t e)
{
    return poly_pow(Poly{BigInt(-root), BigInt(1)}, e);
}

// Characteristic polynomial of the plane rotation by 2*pi*r/q, integral for q in {1,2,3,4,6}.
Poly rotation_block(std::int64_t r, std::int64_t q)
{
    const std::int64_t order = q / std::gcd(r, q);
    switch (order) {
    case 1:
        return {1, -2, 1};
    case 2:
        return {1, 2, 1};
    case 3:
        return {1, 1, 1};
    case 4:
        return {1, 0, 1};
    case 6:
        return {1, -1, 1};
    default:
        throw PreconditionError("rotation by 2*pi*" + std::to_string(r) + "/" + std::to_string(q) +
                                " has no integral characteristic polynomial");
    }
}

bool find_trace_isomorphism(const FiniteOrthogonalGroup &G1, const FiniteOrthogonalGroup &G2)
{
    const std::size_t n = G1.order();
    auto table = [n](const FiniteOrthogonalGroup &G) {
        std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const auto prod = G.elements[a] * G.elements[b];
                mul[a][b] = static_cast<std::size_t>(
                    std::lower_bound(G.elements.begin(), G.elements.end(), prod) - G.elements.begin());
            }
        }
        return mul;
    };
    const auto mul1 = table(G1);
    const auto mul2 = table(G2);
    std::vector<std::size_t> phi(n);
    std::iota(phi.begin(), phi.end(), 0);
    do {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) {
            ok = G1.elements[a].trace() == G2.elements[phi[a]].trace();
        }
        for (std::size_t a = 0; a < n && ok; ++a) {
            for (std::size_t b = 0; b < n && ok; ++b) {
                ok = phi[mul1[a][b]] == mul2[phi[a]][phi[b]];
            }
        }
        if (ok) {
            return true;
        }
    } while (std::next_permutation(phi.begin(), phi.end()));
    return false;
}

} // namespace

SignedPermMatrix::SignedPermMatrix(std::vector<int> image) : image_(std::move(image))
{
    std::vector<char> seen(image_.size(), 0);
    for (const int v : image_) {
        if (v == 0 || static_cast<std::size_t>(std::abs(v)) > image_.size() || seen[index_of(v)]) {
            throw PreconditionError("not a signed permutation");
        }
        seen[index_of(v)] = 1;
    }
}

SignedPermMatrix SignedPermMatrix::identity(std::size_t m)
{
    std::vector<int> image(m);
    std::iota(image.begin(), image.end(), 1);
    return SignedPermMatrix(std::move(image));
}

SignedPermMatrix SignedPermMatrix::from_dense(const std::vector<std::vector<int>> &rows)
{
    const std::size_t m = rows.size();
    std::vector<int> image(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
        if (rows[r].size() != m) {
            throw PreconditionError("matrix is not square");
        }
        for (std::size_t c = 0; c < m; ++c) {
            const int v = rows[r][c];
            if (v == 0) {
                continue;
            }
            if ((v != 1 && v != -1) || image[c] != 0) {
                throw PreconditionError("not a signed permutation");
            }
            image[c] = v * static_cast<int>(r + 1);
        }
    }
    return SignedPermMatrix(std::move(image));
}

int SignedPermMatrix::entry(std::size_t row, std::size_t col) const
{
    return index_of(image_[col]) == row ? sign_of(image_[col]) : 0;
}

std::vector<std::vector<int>> SignedPermMatrix::dense() const
{
    std::vector<std::vector<int>> out(size(), std::vector<int>(size(), 0));
    for (std::size_t c = 0; c < size(); ++c) {
        out[index_of(image_[c])][c] = sign_of(image_[c]);
    }
    return out;
}

SignedPermMatrix SignedPermMatrix::operator*(const SignedPermMatrix &rhs) const
{
    if (rhs.size() != size()) {
        throw PreconditionError("matrix sizes differ");
    }
    std::vector<int> out(size());
    for (std::size_t j = 0; j < size(); ++j) {
        const int b = rhs.image_[j];
        out[j] = sign_of(b) * image_[index_of(b)];
    }
    SignedPermMatrix g;
    g.image_ = std::move(out);
    return g;
}

SignedPermMatrix SignedPermMatrix::inverse() const
{
    std::vector<int> out(size());
    for (std::size_t j = 0; j < size(); ++j) {
        out[index_of(image_[j])] = sign_of(image_[j]) * static_cast<int>(j + 1);
    }
    SignedPermMatrix g;
    g.image_ = std::move(out);
    return g;
}

int SignedPermMatrix::determinant() const
{
    int det = 1;
    std::vector<char> seen(size(), 0);
    for (std::size_t start = 0; start < size(); ++start) {
        if (seen[start]) {
            continue;
        }
        std::size_t len = 0;
        for (std::size_t j = start; !seen[j]; j = index_of(image_[j])) {
            seen[j] = 1;
            det *= sign_of(image_[j]);
            ++len;
        }
        if (len % 2 == 0) {
            det = -det;
        }
    }
    return det;
}

long SignedPermMatrix::trace() const
{
    long tr = 0;
    for (std::size_t j = 0; j < size(); ++j) {
        if (index_of(image_[j]) == j) {
            tr += sign_of(image_[j]);
        }
    }
    return tr;
}

bool SignedPermMatrix::is_identity() const
{
    for (std::size_t j = 0; j < size(); ++j) {
        if (image_[j] != static_cast<int>(j + 1)) {
            return false;
        }
    }
    return true;
}

Poly SignedPermMatrix::char_poly() const
{
    Poly out{1};
    std::vector<char> seen(size(), 0);
    for (std::size_t start = 0; start < size(); ++start) {
        if (seen[start]) {
            continue;
        }
        std::size_t len = 0;
        int eps = 1;
        for (std::size_t j = start; !seen[j]; j = index_of(image_[j])) {
            seen[j] = 1;
            eps *= sign_of(image_[j]);
            ++len;
        }
        Poly factor(len + 1, 0);
        factor[0] = -eps;
        factor[len] = 1;
        out = poly_mul(out, factor);
    }
    return out;
}

FiniteOrthogonalGroup generate_group(const std::vector<SignedPermMatrix> &generators, std::size_t max_order)
{
    if (generators.empty()) {
        throw PreconditionError("no generators");
    }
    const std::size_t m = generators.front().size();
    for (const auto &g : generators) {
        if (g.size() != m) {
            throw PreconditionError("generators have different sizes");
        }
    }
    // In a finite group, closing the identity under right multiplication by
    // the generators already yields every inverse.
    std::set<SignedPermMatrix> seen{SignedPermMatrix::identity(m)};
    std::vector<SignedPermMatrix> frontier{SignedPermMatrix::identity(m)};
    while (!frontier.empty()) {
        std::vector<SignedPermMatrix> next;
        for (const auto &h : frontier) {
            for (const auto &g : generators) {
                auto prod = h * g;
                if (seen.insert(prod).second) {
                    if (seen.size() > max_order) {
                        throw PreconditionError("group too large");
                    }
                    next.push_back(std::move(prod));
                }
            }
        }
        frontier = std::move(next);
    }
    return {m, std::vector<SignedPermMatrix>(seen.begin(), seen.end())};
}

std::pair<FiniteOrthogonalGroup, FiniteOrthogonalGroup> gassmann_pair(std::size_t d)
{
    if (d < 5) {
        throw PreconditionError("gassmann_pair needs d >= 5");
    }
    const std::size_t m = d + 1;
    const std::vector<SignedPermMatrix> first{
        pair_swaps(m, {{0, 1}, {2, 3}}),
        pair_swaps(m, {{0, 2}, {1, 3}}),
        pair_swaps(m, {{0, 3}, {1, 2}}),
    };
    const std::vector<SignedPermMatrix> second{
        pair_swaps(m, {{0, 1}, {2, 3}}),
        pair_swaps(m, {{0, 1}, {4, 5}}),
        pair_swaps(m, {{2, 3}, {4, 5}}),
    };
    auto G1 = generate_group(first, 4);
    auto G2 = generate_group(second, 4);
    if (G1.order() != 4 || G2.order() != 4) {
        throw InvariantViolation("pair-swap sets are not closed groups of order 4");
    }
    return {std::move(G1), std::move(G2)};
}

ConjugacyFingerprint char_fingerprint(const FiniteOrthogonalGroup &G)
{
    ConjugacyFingerprint fp;
    for (const auto &g : G.elements) {
        fp.push_back(g.char_poly());
    }
    std::sort(fp.begin(), fp.end());
    return fp;
}

bool almost_conjugate(const FiniteOrthogonalGroup &G1, const FiniteOrthogonalGroup &G2)
{
    if (G1.m != G2.m) {
        throw PreconditionError("matrix sizes differ");
    }
    return G1.order() == G2.order() && char_fingerprint(G1) == char_fingerprint(G2);
}

std::size_t fixed_space_dim(const FiniteOrthogonalGroup &G)
{
    std::vector<std::vector<mpq_class>> rows;
    for (const auto &g : G.elements) {
        if (g.is_identity()) {
            continue;
        }
        const auto dense = g.dense();
        for (std::size_t r = 0; r < G.m; ++r) {
            std::vector<mpq_class> row(G.m);
            for (std::size_t c = 0; c < G.m; ++c) {
                row[c] = dense[r][c] - (r == c ? 1 : 0);
            }
            rows.push_back(std::move(row));
        }
    }
    return G.m - rational_rank(std::move(rows), G.m);
}

std::size_t fixed_coordinate_count(const FiniteOrthogonalGroup &G)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < G.m; ++i) {
        const bool fixed = std::all_of(G.elements.begin(), G.elements.end(), [i](const SignedPermMatrix &g) {
            return g.image()[i] == static_cast<int>(i + 1);
        });
        count += fixed ? 1 : 0;
    }
    return count;
}

Distinction distinguish(const FiniteOrthogonalGroup &G1, const FiniteOrthogonalGroup &G2, std::size_t search_limit)
{
    if (G1.m != G2.m) {
        return {Verdict::distinguished, "matrix sizes differ"};
    }
    if (G1.order() != G2.order()) {
        return {Verdict::distinguished, "orders differ"};
    }
    const std::size_t f1 = fixed_space_dim(G1), f2 = fixed_space_dim(G2);
    if (f1 != f2) {
        return {Verdict::distinguished,
                "fixed space dimensions differ (" + std::to_string(f1) + " vs " + std::to_string(f2) + ")"};
    }
    if (char_fingerprint(G1) != char_fingerprint(G2)) {
        return {Verdict::distinguished, "characteristic polynomial multisets differ"};
    }
    if (G1.order() <= search_limit) {
        // Real representations of a finite group with equal characters are
        // equivalent, and equivalent orthogonal representations are
        // orthogonally equivalent.
        if (find_trace_isomorphism(G1, G2)) {
            return {Verdict::conjugate, "trace-preserving isomorphism found; the representations are equivalent"};
        }
        return {Verdict::distinguished, "no isomorphism preserves traces"};
    }
    return {Verdict::undecided, "invariants agree; order above the isomorphism search limit"};
}

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::distinguished:
        return "distinguished";
    case Verdict::conjugate:
        return "conjugate";
    case Verdict::undecided:
        return "undecided";
    }
    return "undecided";
}

std::vector<BigInt> orbifold_spectrum_slice(const ConjugacyFingerprint &fp, std::size_t K)
{
    if (fp.empty()) {
        throw PreconditionError("empty fingerprint");
    }
    std::map<Poly, std::size_t> counts;
    for (const auto &p : fp) {
        ++counts[p];
    }
    std::vector<BigInt> sum(K + 1, 0);
    for (const auto &[chi, mult] : counts) {
        // det(I - g z) is chi with its coefficients reversed.
        const Poly D(chi.rbegin(), chi.rend());
        if (D.empty() || D[0] != 1) {
            throw InvariantViolation("characteristic polynomial is not monic");
        }
        std::vector<BigInt> series(K + 1, 0);
        series[0] = 1;
        for (std::size_t k = 1; k <= K; ++k) {
            BigInt acc = 0;
            for (std::size_t i = 1; i < D.size() && i <= k; ++i) {
                acc -= D[i] * series[k - i];
            }
            series[k] = acc;
        }
        for (std::size_t k = 0; k <= K; ++k) {
            sum[k] += static_cast<unsigned long>(mult) * series[k];
        }
    }
    const BigInt order = static_cast<unsigned long>(fp.size());
    std::vector<BigInt> out(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        BigInt v = sum[k] - (k >= 2 ? sum[k - 2] : BigInt(0));
        if (v % order != 0) {
            throw InvariantViolation("spectral series coefficient at k = " + std::to_string(k) + " is not an integer");
        }
        v /= order;
        if (v < 0) {
            throw InvariantViolation("negative multiplicity at k = " + std::to_string(k));
        }
        out[k] = v;
    }
    return out;
}

std::vector<BigInt> orbifold_spectrum_slice(const FiniteOrthogonalGroup &G, std::size_t K)
{
    return orbifold_spectrum_slice(char_fingerprint(G), K);
}

ConjugacyFingerprint lens_fingerprint(const lens::LensParams &L)
{
    const lens::LensParams e = L.effective();
    ConjugacyFingerprint fp;
    for (std::int64_t j = 0; j < e.q; ++j) {
        Poly p{1};
        for (const auto s : e.s) {
            p = poly_mul(p, rotation_block(modarith::mod(j * s, e.q), e.q));
        }
        fp.push_back(std::move(p));
    }
    std::sort(fp.begin(), fp.end());
    return fp;
}

std::vector<ConjugacyFingerprint> small_order_classes(std::size_t d, int order)
{
    const std::size_t m = d + 1;
    std::vector<ConjugacyFingerprint> out;
    if (order == 2) {
        for (std::size_t neg = 1; neg <= m; ++neg) {
            ConjugacyFingerprint fp{x_minus(1, m), poly_mul(x_minus(-1, neg), x_minus(1, m - neg))};
            std::sort(fp.begin(), fp.end());
            out.push_back(std::move(fp));
        }
    } else if (order == 3) {
        // g and g^2 share the characteristic polynomial: the xi_3 pairs only swap.
        const Poly cyclotomic{1, 1, 1};
        for (std::size_t blocks = 1; 2 * blocks <= m; ++blocks) {
            const Poly p = poly_mul(poly_pow(cyclotomic, blocks), x_minus(1, m - 2 * blocks));
            ConjugacyFingerprint fp{x_minus(1, m), p, p};
            std::sort(fp.begin(), fp.end());
            out.push_back(std::move(fp));
        }
    } else {
        throw PreconditionError("order must be 2 or 3");
    }
    return out;
}

bool small_order_uniqueness(std::size_t d, int order, std::size_t K)
{
    const auto classes = small_order_classes(d, order);
    std::vector<std::vector<BigInt>> slices;
    for (const auto &fp : classes) {
        slices.push_back(orbifold_spectrum_slice(fp, K));
    }
    for (std::size_t i = 0; i < slices.size(); ++i) {
        for (std::size_t j = i + 1; j < slices.size(); ++j) {
            if (slices[i] == slices[j]) {
                return false;
            }
        }
    }
    return true;
}

Poly poly_mul(const Poly &a, const Poly &b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

Poly poly_pow(const Poly &a, std::size_t e)
{
    Poly out{1};
    for (std::size_t i = 0; i < e; ++i) {
        out = poly_mul(out, a);
    }
    return out;
}

std::string format_poly(const Poly &p)
{
    std::string out;
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) {
            continue;
        }
        const bool negative = p[i] < 0;
        const BigInt mag = abs(p[i]);
        if (out.empty()) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        if (mag != 1 || i == 0) {
            out += mag.get_str();
        }
        if (i >= 1) {
            out += "x";
        }
        if (i >= 2) {
            out += "^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

std::vector<SignedPermMatrix> parse_generators(std::string_view text)
{
    std::vector<SignedPermMatrix> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::string body;
        for (const char c : line) {
            if (c == '(' || c == ')' || c == '|' || c == ',' || c == '\t' || c == '\r') {
                body.push_back(' ');
            } else {
                body.push_back(c);
            }
        }
        std::vector<int> image;
        std::size_t pos = 0;
        while (pos < body.size()) {
            if (body[pos] == ' ') {
                ++pos;
                continue;
            }
            const std::size_t end = std::min(body.find(' ', pos), body.size());
            int v = 0;
            const auto [ptr, ec] = std::from_chars(body.data() + pos, body.data() + end, v);
            if (ec != std::errc{} || ptr != body.data() + end) {
                throw ParseError("line " + std::to_string(line_no) + ": malformed entry '" + body.substr(pos, end - pos) + "'");
            }
            image.push_back(v);
            pos = end;
        }
        if (image.empty()) {
            continue;
        }
        if (!out.empty() && image.size() != out.front().size()) {
            throw ParseError("line " + std::to_string(line_no) + ": generator of size " + std::to_string(image.size()) +
                             ", expected " + std::to_string(out.front().size()));
        }
        try {
            out.emplace_back(std::move(image));
        } catch (const PreconditionError &e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (out.empty()) {
        throw ParseError("no generators found");
    }
    return out;
}

std::string format_matrix(const SignedPermMatrix &g)
{
    std::string out = "(";
    const auto &img = g.image();
    for (std::size_t j = 0; j < img.size(); ++j) {
        if (j > 0) {
            out += j % 2 == 0 ? " | " : " ";
        }
        out += std::to_string(img[j]);
    }
    return out + ")";
}

} // namespace lensspec::orbifold
