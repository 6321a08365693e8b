// Acceptance checks. `lensspec_acceptance <id>` runs one criterion, no argument runs all.
// Each criterion prints one PASS/FAIL line followed by indented detail lines.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "lensspec/eigen_equiv.hpp"
#include "lensspec/enumeration.hpp"
#include "lensspec/orbifold.hpp"
#include "lensspec/parallel.hpp"
#include "lensspec/properties.hpp"
#include "lensspec/serialize.hpp"
#include "lensspec/towers.hpp"

using namespace lensspec;
using enumeration::Cell;
using enumeration::Mode;
using S = std::vector<std::int64_t>;

namespace
{

struct Outcome
{
    bool pass = true;
    std::vector<std::string> details;

    void expect(bool ok, const std::string &what)
    {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok    " : "FAILED") + "  " + what);
    }
    void note(const std::string &what) { details.push_back("info    " + what); }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string secs(double s)
{
    std::ostringstream out;
    out.precision(3);
    out << std::fixed << s << " s";
    return out.str();
}

std::string key_text(const S &s)
{
    return format_key(lens::IsometryClassKey{0, s});
}

struct PrintedPair
{
    std::int64_t q;
    std::size_t n;
    S first;
    S second;
};

// The published minimal-pair table.
const std::vector<PrintedPair> printed_pairs{
    {11, 3, {1, 2, 3}, {1, 2, 4}},
    {11, 7, {1, 1, 2, 2, 3, 3, 4}, {1, 1, 2, 2, 3, 3, 5}},
    {11, 11, {1, 1, 1, 2, 2, 2, 3, 3, 3, 5, 5}, {1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 4}},
    {13, 3, {1, 2, 3}, {1, 2, 4}},
    {13, 4, {1, 2, 3, 4}, {1, 2, 3, 5}},
    {13, 7, {1, 1, 2, 2, 3, 3, 5}, {1, 1, 2, 2, 3, 4, 4}},
    {13, 8, {1, 1, 2, 2, 3, 3, 4, 4}, {1, 1, 2, 2, 3, 3, 5, 5}},
    {16, 5, {1, 1, 3, 3, 5}, {1, 1, 3, 3, 7}},
    {17, 3, {1, 2, 5}, {1, 2, 6}},
    {17, 4, {1, 2, 3, 5}, {1, 2, 3, 6}},
    {17, 5, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 6}},
    {17, 6, {1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 7}},
    {19, 3, {1, 2, 7}, {1, 3, 4}},
    {19, 4, {1, 2, 6, 8}, {1, 3, 4, 5}},
    {19, 5, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 6}},
    {19, 6, {1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 7}},
    {19, 7, {1, 2, 3, 4, 5, 6, 7}, {1, 2, 3, 4, 5, 6, 8}},
    {20, 5, {1, 1, 3, 3, 7}, {1, 1, 3, 3, 9}},
    {21, 4, {1, 2, 4, 5}, {1, 2, 4, 8}},
    {22, 3, {1, 3, 5}, {1, 3, 7}},
    {22, 7, {1, 1, 3, 3, 5, 5, 9}, {1, 1, 3, 3, 5, 7, 7}},
    {23, 4, {1, 2, 4, 5}, {1, 2, 4, 8}},
    {23, 5, {1, 2, 3, 4, 11}, {1, 2, 3, 5, 6}},
    {23, 6, {1, 2, 3, 4, 5, 10}, {1, 2, 3, 4, 6, 7}},
    {23, 7, {1, 2, 3, 4, 5, 6, 7}, {1, 2, 3, 4, 5, 6, 8}},
    {23, 8, {1, 2, 3, 4, 5, 6, 7, 8}, {1, 2, 3, 4, 5, 6, 7, 9}},
};

enumeration::SearchOptions options()
{
    enumeration::SearchOptions opts;
    opts.jobs = default_jobs();
    return opts;
}

Outcome flagship()
{
    Outcome o;
    const auto a = parse_lens("L(11;1,2,3)");
    const auto b = parse_lens("L(11;1,2,4)");
    const auto start = std::chrono::steady_clock::now();
    const auto d = lens::decide_isospectral(a, b);
    const bool iso = lens::are_isometric(a, b);
    const double t = seconds_since(start);
    o.expect(d.isospectral, "isospectral = true");
    o.expect(!d.heuristic && d.cutoff == 76, "certified at cutoff K = " + std::to_string(d.cutoff));
    o.expect(!iso, "isometric = false");
    o.expect(t < 1.0, "runtime " + secs(t) + " < 1 s");
    return o;
}

Outcome table1_rows()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto rows = enumeration::table1(3, 8, 3, 23, options());
    o.note("search over 3 <= n <= 8, 3 <= q <= 23 took " + secs(seconds_since(start)));

    std::map<std::pair<std::int64_t, std::size_t>, const enumeration::Table1Row *> found;
    for (const auto &row : rows) {
        found[{row.q, row.n}] = &row;
    }
    std::size_t expected = 0;
    for (const auto &p : printed_pairs) {
        if (p.n > 8) {
            continue;
        }
        ++expected;
        const std::string where = "q=" + std::to_string(p.q) + " n=" + std::to_string(p.n) + ": ";
        const auto it = found.find({p.q, p.n});
        if (it == found.end()) {
            o.expect(false, where + "no family reported");
            continue;
        }
        const auto &row = *it->second;
        const bool match = row.first.canonical_s == p.first && row.second.canonical_s == p.second;
        o.expect(match, where + "minimal pair " + key_text(row.first.canonical_s) + "/" +
                            key_text(row.second.canonical_s) + (match ? "" : ", expected " + key_text(p.first) + "/" + key_text(p.second)));
        if (!match) {
            // the expected pair itself: same family, isospectral and non-isometric?
            const auto L1 = lens::make_lens(p.q, p.first);
            const auto L2 = lens::make_lens(p.q, p.second);
            const bool genuine = lens::are_isospectral(L1, L2) && !lens::are_isometric(L1, L2);
            const bool smaller = row.first.canonical_s < p.first;
            o.note(where + "expected pair is " + (genuine ? "" : "NOT ") + "an isospectral non-isometric pair; " +
                   "the reported pair is lexicographically " + (smaller ? "smaller" : "not smaller"));
        }
    }
    o.expect(rows.size() == expected, "row count " + std::to_string(rows.size()) + " == " + std::to_string(expected));
    return o;
}

Outcome table2_grid()
{
    Outcome o;
    // X = pair of highest volume, x = pair, - = none
    const std::vector<std::string> grid{
        "Xx-xx--x-", "-X-xx-x-x", "--Xxxx--x", "---Xx---x", "Xx--x--xx", "Xx-----xx",
        "-Xx--xx-x", "-X-x--x--", "X--xx--x-", "X--xx--x-", "Xxxxxx-xx", "-X-xx-x-x",
    };
    const std::vector<std::int64_t> qs{11, 13, 16, 17, 19, 20, 21, 22, 23};
    std::vector<std::size_t> ns;
    for (std::size_t n = 3; n <= 14; ++n) {
        ns.push_back(n);
    }
    auto start = std::chrono::steady_clock::now();
    const auto table = enumeration::existence_table(ns, qs, Mode::manifold, options());
    o.note("grid for 3 <= n <= 14 took " + secs(seconds_since(start)));
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::string got;
        for (const auto c : table.cells[i]) {
            got += enumeration::cell_symbol(c);
        }
        const bool ok = got == grid[i];
        mismatches += ok ? 0 : 1;
        o.expect(ok, "n=" + std::to_string(ns[i]) + " " + got + (ok ? "" : " expected " + grid[i]));
    }

    std::vector<std::int64_t> empty_qs;
    for (std::int64_t q = 1; q <= 10; ++q) {
        empty_qs.push_back(q);
    }
    for (const std::int64_t q : {12, 14, 15, 18}) {
        empty_qs.push_back(q);
    }
    start = std::chrono::steady_clock::now();
    const auto none = enumeration::existence_table(ns, empty_qs, Mode::manifold, options());
    bool all_none = true;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        for (std::size_t j = 0; j < empty_qs.size(); ++j) {
            if (none.cells[i][j] != Cell::none) {
                all_none = false;
                o.note("unexpected pair at n=" + std::to_string(ns[i]) + " q=" + std::to_string(empty_qs[j]));
            }
        }
    }
    o.expect(all_none, "no pairs for q <= 10 or q in {12,14,15,18}, n <= 14 (" + secs(seconds_since(start)) + ")");
    return o;
}

Outcome table3_density()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::tuple<std::int64_t, long, long, std::string>> expect{
        {50, 990, 40, "0.95960"}, {100, 6680, 64, "0.99042"}};
    for (const auto &[x, total, nonunique, dens] : expect) {
        const auto r = enumeration::density(3, x, options());
        const auto printed = format_decimal(r.density, 5);
        o.expect(r.total_count == total && printed == dens,
                 "n=3 x=" + std::to_string(x) + ": total " + r.total_count.get_str() + ", density " + printed);
        o.expect(r.nonunique_count == nonunique, "non-unique classes " + r.nonunique_count.get_str());
    }
    const double t = seconds_since(start);
    o.expect(t < 600, "runtime " + secs(t) + " < 10 min");
    return o;
}

Outcome extension_closure()
{
    Outcome o;
    for (const auto &p : printed_pairs) {
        if (p.q != 11 && p.q != 13) {
            continue;
        }
        const auto A = enumeration::extend_params(lens::make_lens(p.q, p.first), 1);
        const auto B = enumeration::extend_params(lens::make_lens(p.q, p.second), 1);
        const auto d = lens::decide_isospectral(A, B);
        const bool iso = lens::are_isometric(A, B);
        const auto dim = static_cast<std::int64_t>(A.dimension());
        const bool dim_ok = dim == static_cast<std::int64_t>(2 * p.n - 1) + modarith::totient(p.q);
        o.expect(d.isospectral && !d.heuristic && !iso && dim_ok,
                 "q=" + std::to_string(p.q) + " n=" + std::to_string(p.n) + " -> dimension " + std::to_string(dim) +
                     ", isospectral at K=" + std::to_string(d.cutoff) + ", isometric " + (iso ? "true" : "false"));
    }
    return o;
}

Outcome tower()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto T = towers::build_tower(11, 1, 12, {1, 2, 8}, 2);
    const auto rep = towers::verify_tower(T, 1, default_jobs());
    for (const auto &lv : rep.levels) {
        std::string line = "level " + std::to_string(lv.j) + " " + format_lens(T.levels[lv.j].M) + " / " +
                           format_lens(T.levels[lv.j].N) + ": predicate " + (lv.predicate ? "ok" : "failed") +
                           ", congruence " + (lv.congruence ? "ok" : "failed");
        if (lv.full) {
            line += std::string(", full ") + (*lv.full ? "ok" : "failed") + " at K=" + std::to_string(lv.full_cutoff);
        }
        o.expect(lv.predicate && lv.congruence && lv.full.value_or(true), line);
    }
    o.expect(rep.levels.size() == 3 && rep.levels[0].full && rep.levels[1].full && !rep.levels[2].full,
             "full certification exactly at levels 0 and 1");
    for (const auto &f : rep.failures) {
        o.note("failure at level " + std::to_string(f.level) + " (" + f.check + "): " + f.witness);
    }
    o.expect(rep.ok, "verify_tower ok");
    const double t = seconds_since(start);
    o.expect(t < 1800, "runtime " + secs(t) + " < 30 min");
    return o;
}

Outcome predicates()
{
    Outcome o;
    const towers::Tuple a{1, 3, 6};
    const std::set<std::int64_t> not_univalent{1, 2, 3, 5};
    const std::set<std::int64_t> reversible{1, 2, 4, 7, 8};
    const std::set<std::int64_t> useful{11, 13, 14, 16, 17, 19};
    std::string uni, rev, use;
    bool ok_u = true, ok_r = true, ok_use = true, ok_g = true, ok_h = true;
    for (std::int64_t r = 1; r <= 20; ++r) {
        const bool u = towers::is_univalent(a, r);
        const bool v = towers::is_reversible(a, r);
        ok_u = ok_u && u == !not_univalent.count(r);
        ok_r = ok_r && v == static_cast<bool>(reversible.count(r));
        ok_g = ok_g && towers::is_good(a, r) == (r != 3 && r != 5);
        ok_h = ok_h && towers::is_hereditarily_good(a, r) == (r % 3 != 0 && r % 5 != 0);
        uni += u ? "" : " " + std::to_string(r);
        rev += v ? " " + std::to_string(r) : "";
        if (std::gcd(r, std::int64_t{15}) == 1) {
            const bool w = towers::is_useful(a, r);
            ok_use = ok_use && w == static_cast<bool>(useful.count(r));
            use += w ? " " + std::to_string(r) : "";
        }
    }
    o.expect(ok_u, "not univalent for r in {" + uni + " }");
    o.expect(ok_r, "reversible for r in {" + rev + " }");
    o.expect(ok_g, "good iff r not in {3, 5}");
    o.expect(ok_h, "hereditarily good iff 3 and 5 do not divide r");
    o.expect(ok_use, "useful (r coprime to 15) for r in {" + use + " }");
    return o;
}

Outcome gassmann()
{
    Outcome o;
    for (std::size_t d = 5; d <= 9; ++d) {
        const auto [G1, G2] = orbifold::gassmann_pair(d);
        const std::string where = "d=" + std::to_string(d) + ": ";
        o.expect(orbifold::almost_conjugate(G1, G2), where + "almost conjugate");
        const auto f1 = orbifold::fixed_space_dim(G1);
        const auto f2 = orbifold::fixed_space_dim(G2);
        o.expect(f1 == d - 3 && f2 == d - 5, where + "fixed_space_dim = (" + std::to_string(f1) + ", " +
                                                 std::to_string(f2) + "), expected (" + std::to_string(d - 3) + ", " +
                                                 std::to_string(d - 5) + ")");
        o.expect(orbifold::orbifold_spectrum_slice(G1, 50) == orbifold::orbifold_spectrum_slice(G2, 50),
                 where + "spectrum slices agree for k <= 50");
        const auto dist = orbifold::distinguish(G1, G2);
        o.note(where + "fixed coordinate axes (" + std::to_string(orbifold::fixed_coordinate_count(G1)) + ", " +
               std::to_string(orbifold::fixed_coordinate_count(G2)) + "); conjugacy verdict " +
               orbifold::verdict_name(dist.verdict) + ": " + dist.reason);
    }
    o.note("every non-identity element of either group has trace d-3, so the average trace (the dimension of the");
    o.note("common fixed space) is d-2 for both; the expected (d-3, d-5) counts fixed coordinate axes instead.");
    o.note("Equal characters of real representations also make the two groups conjugate in O(d+1).");
    return o;
}

Outcome small_orders()
{
    Outcome o;
    for (std::size_t d = 5; d <= 9; ++d) {
        for (const int order : {2, 3}) {
            const auto classes = orbifold::small_order_classes(d, order).size();
            o.expect(orbifold::small_order_uniqueness(d, order, 50),
                     "d=" + std::to_string(d) + " order " + std::to_string(order) + ": " + std::to_string(classes) +
                         " classes, pairwise distinct spectra up to k=50");
        }
    }
    return o;
}

Outcome eigen_equivalence()
{
    Outcome o;
    const auto a = parse_lens("L(6;1,2,3)");
    const auto b = parse_lens("L(5;1,1,2)");
    const auto ka = eigen::k0(a);
    const auto kb = eigen::k0(b);
    o.expect(eigen::are_eigenvalue_equivalent(a, b), "L(6;1,2,3) and L(5;1,1,2) eigenvalue equivalent");
    o.expect(ka == std::optional<std::size_t>{3} && kb == std::optional<std::size_t>{3},
             "k0 = " + (ka ? std::to_string(*ka) : "none") + ", " + (kb ? std::to_string(*kb) : "none"));
    const auto fam = eigen::eigenvalue_equivalent_family(3, 50);
    bool all = fam.size() == 48;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
            all = all && eigen::are_eigenvalue_equivalent(fam[i], fam[j]);
        }
    }
    o.expect(all, "L(q;1,1,2), 3 <= q <= 50: " + std::to_string(fam.size()) + " members pairwise equivalent");
    const auto ratio = eigen::volume_ratio(fam);
    o.expect(ratio == mpq_class(50, 3), "volume ratio " + ratio.get_str());
    return o;
}

Outcome low_volume_prefix()
{
    Outcome o;
    const auto r = eigen::example_5_4(10);
    o.expect(r.q == 12, "q = " + std::to_string(r.q) + " (" + format_lens(r.L1) + ", " + format_lens(r.L2) + ")");
    o.expect(r.agree_count >= 12, "first eigenvalues agree for " + r.agree_count.get_str() + " terms (>= 12)");
    o.expect(!r.isospectral, "isospectral = false (multiplicities first differ at k=" +
                                 std::to_string(r.first_divergent_k) + ")");
    return o;
}

Outcome congruences()
{
    Outcome o;
    std::vector<std::int64_t> failing;
    for (std::int64_t n = 3; n <= 1000; ++n) {
        if (!enumeration::congruence_condition(n)) {
            failing.push_back(n);
        }
    }
    std::string list;
    for (const auto n : failing) {
        list += " " + std::to_string(n);
    }
    o.expect(failing == std::vector<std::int64_t>{144, 935}, "fails exactly for n in {" + list + " }");
    return o;
}

Outcome property_suites()
{
    Outcome o;
    constexpr std::uint64_t seed = 20240611;
    o.note("seed " + std::to_string(seed));
    for (const auto &p : properties::run_all(seed, 100)) {
        o.expect(p.failures == 0 && p.cases >= 100, p.name + ": " + std::to_string(p.cases - p.failures) + "/" +
                                                        std::to_string(p.cases) +
                                                        (p.failures ? " first failure " + p.counterexample : ""));
    }
    return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
    {"flagship pair L(11;1,2,3) ~ L(11;1,2,4)", flagship},
    {"minimal isospectral pairs, q <= 23, n <= 8", table1_rows},
    {"existence grid, 3 <= n <= 14", table2_grid},
    {"density of spectrally unique lens spaces, n = 3", table3_density},
    {"extension by t(q) keeps pairs isospectral", extension_closure},
    {"isospectral tower (11, 1, 12, (1,2,8)), depth 2", tower},
    {"tuple predicates for a = (1,3,6), r <= 20", predicates},
    {"almost conjugate pair in SO(d+1), d = 5..9", gassmann},
    {"order-2 and order-3 spectral uniqueness, d = 5..9", small_orders},
    {"eigenvalue equivalent families", eigen_equivalence},
    {"long first-eigenvalue agreement without isospectrality", low_volume_prefix},
    {"congruence conditions, 3 <= n <= 1000", congruences},
    {"seeded property suites", property_suites},
};

bool run(std::size_t id)
{
    const auto &[name, fn] = criteria.at(id - 1);
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        o = fn();
    } catch (const std::exception &e) {
        o.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " [" << secs(seconds_since(start))
              << "]\n";
    for (const auto &d : o.details) {
        std::cout << "    " << d << "\n";
    }
    std::cout.flush();
    return o.pass;
}

} // namespace

int main(int argc, char **argv)
{
    if (argc > 2) {
        std::cerr << "usage: lensspec_acceptance [criterion 1-" << criteria.size() << "]\n";
        return 2;
    }
    if (argc == 2) {
        const long id = std::strtol(argv[1], nullptr, 10);
        if (id < 1 || id > static_cast<long>(criteria.size())) {
            std::cerr << "unknown criterion " << argv[1] << "\n";
            return 2;
        }
        return run(static_cast<std::size_t>(id)) ? 0 : 1;
    }
    bool all = true;
    for (std::size_t id = 1; id <= criteria.size(); ++id) {
        all = run(id) && all;
    }
    return all ? 0 : 1;
}
