#include "lensspec/enumeration.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <numeric>
#include <unordered_map>

#include "lensspec/parallel.hpp"

namespace lensspec::enumeration
{

using lens::IsometryClassKey;
using lens::LensParams;

namespace
{

std::vector<std::int64_t> residue_alphabet(std::int64_t q, Mode mode)
{
    std::vector<std::int64_t> out;
    for (std::int64_t r = mode == Mode::orbifold ? 0 : 1; r <= q / 2; ++r) {
        if (mode == Mode::orbifold || std::gcd(r, q) == 1) {
            out.push_back(r);
        }
    }
    return out;
}

std::uint64_t digest(const std::vector<std::uint64_t> &v)
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const std::uint64_t x : v) {
        std::uint64_t z = x + h + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        h = z ^ (z >> 31);
    }
    return h;
}

std::string sweep_key(const char *what, std::size_t n, std::int64_t q, Mode mode, const SearchOptions &opts)
{
    std::string key = std::string(what) + "_n" + std::to_string(n) + "_q" + std::to_string(q) +
                      (mode == Mode::orbifold ? "_orb" : "_man");
    if (opts.prefix) {
        key += "_p" + std::to_string(*opts.prefix);
    }
    if (opts.cutoff_override) {
        key += "_k" + std::to_string(*opts.cutoff_override);
    }
    return key;
}

std::optional<std::string> load_checkpoint(const SearchOptions &opts, const std::string &key)
{
    if (opts.workdir.empty()) {
        return std::nullopt;
    }
    std::ifstream in(std::filesystem::path(opts.workdir) / (key + ".ckpt"));
    if (!in) {
        return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void store_checkpoint(const SearchOptions &opts, const std::string &key, const std::string &value)
{
    if (opts.workdir.empty()) {
        return;
    }
    const std::filesystem::path dir(opts.workdir);
    std::filesystem::create_directories(dir);
    // Write then rename, so an interrupted sweep never leaves a torn entry.
    const auto tmp = dir / (key + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
    {
        std::ofstream out(tmp);
        out << value;
    }
    std::filesystem::rename(tmp, dir / (key + ".ckpt"));
}

std::string encode_key(const IsometryClassKey &key)
{
    std::string out;
    for (std::size_t i = 0; i < key.canonical_s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(key.canonical_s[i]);
    }
    return out;
}

IsometryClassKey decode_key(std::int64_t q, const std::string &text)
{
    IsometryClassKey key{q, {}};
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        key.canonical_s.push_back(std::stoll(item));
    }
    return key;
}

LensParams to_lens(const IsometryClassKey &key)
{
    return lens::make_lens(key.q, key.canonical_s);
}

// Splits `members` into isospectrality classes. Equal digests of the
// certification-depth residues are only a hint; every merge is backed by an
// exact decide_isospectral call against the class representative.
std::vector<std::vector<std::size_t>> certify_bucket(const std::vector<IsometryClassKey> &keys,
                                                     const std::vector<std::size_t> &members,
                                                     const std::vector<std::uint64_t> &digests,
                                                     std::optional<std::size_t> cutoff_override)
{
    std::map<std::uint64_t, std::vector<std::size_t>> by_digest;
    for (std::size_t i = 0; i < members.size(); ++i) {
        by_digest[digests[i]].push_back(members[i]);
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto &[d, group] : by_digest) {
        std::vector<std::vector<std::size_t>> classes;
        for (const std::size_t idx : group) {
            const LensParams L = to_lens(keys[idx]);
            bool placed = false;
            for (auto &cls : classes) {
                if (lens::decide_isospectral(to_lens(keys[cls.front()]), L, cutoff_override).isospectral) {
                    cls.push_back(idx);
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                classes.push_back({idx});
            }
        }
        for (auto &cls : classes) {
            if (cls.size() >= 2) {
                out.push_back(std::move(cls));
            }
        }
    }
    return out;
}

} // namespace

std::vector<IsometryClassKey> enumerate_classes(std::size_t n, std::int64_t q, Mode mode)
{
    if (n < 2) {
        throw PreconditionError("dimension below 3 unsupported");
    }
    if (q < 1) {
        throw PreconditionError("lens modulus must be positive");
    }
    if (q == 1) {
        return {IsometryClassKey{1, std::vector<std::int64_t>(n, 0)}};
    }
    const auto alphabet = residue_alphabet(q, mode);
    std::vector<IsometryClassKey> out;
    if (alphabet.empty()) {
        return out;
    }
    // Non-decreasing index tuples in lexicographic order; each sorted,
    // sign-normalized tuple is kept iff it is its own orbit minimum, so the
    // output is duplicate-free and already sorted.
    std::vector<std::size_t> idx(n, 0);
    std::vector<std::int64_t> tuple(n);
    while (true) {
        std::int64_t g = q;
        for (std::size_t i = 0; i < n; ++i) {
            tuple[i] = alphabet[idx[i]];
            g = std::gcd(g, tuple[i]);
        }
        if (g == 1 && lens::is_canonical(q, tuple)) {
            out.push_back({q, tuple});
        }
        std::size_t pos = n;
        while (pos > 0 && idx[pos - 1] + 1 == alphabet.size()) {
            --pos;
        }
        if (pos == 0) {
            break;
        }
        const std::size_t v = idx[pos - 1] + 1;
        for (std::size_t i = pos - 1; i < n; ++i) {
            idx[i] = v;
        }
    }
    return out;
}

FamilyReport find_isospectral_families(std::size_t n, std::int64_t q, Mode mode, const SearchOptions &opts)
{
    FamilyReport report;
    report.n = n;
    report.q = q;
    report.mode = mode;
    const auto keys = enumerate_classes(n, q, mode);
    report.classes = keys.size();
    report.cutoff = opts.cutoff_override.value_or(lens::isospectral_cutoff(q, n));
    report.prefix = std::min(opts.prefix.value_or(2 * n + 10), report.cutoff);
    if (keys.size() < 2) {
        return report;
    }

    // Distinct prefix residues prove distinct prefix counts, so only classes
    // sharing a bucket can possibly be isospectral.
    const std::size_t chunk = 256;
    const std::size_t chunks = (keys.size() + chunk - 1) / chunk;
    const auto prints = parallel_map<std::vector<std::uint64_t>>(chunks, opts.jobs, [&](std::size_t c) {
        std::vector<std::uint64_t> out;
        for (std::size_t i = c * chunk; i < std::min(keys.size(), (c + 1) * chunk); ++i) {
            out.push_back(digest(lens::lattice_counts_fingerprint(to_lens(keys[i]), report.prefix)));
        }
        return out;
    });
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t j = 0; j < prints[c].size(); ++j) {
            buckets[prints[c][j]].push_back(c * chunk + j);
        }
    }
    std::vector<std::vector<std::size_t>> candidates;
    for (auto &[d, members] : buckets) {
        if (members.size() >= 2) {
            candidates.push_back(std::move(members));
        }
    }
    // Bucket iteration order is unspecified; fix it before any work is scheduled.
    std::sort(candidates.begin(), candidates.end());

    const auto families = parallel_map<std::vector<std::vector<std::size_t>>>(
        candidates.size(), opts.jobs, [&](std::size_t b) {
            const auto &members = candidates[b];
            std::vector<std::uint64_t> deep;
            for (const std::size_t idx : members) {
                deep.push_back(digest(lens::lattice_counts_fingerprint(to_lens(keys[idx]), report.cutoff)));
            }
            return certify_bucket(keys, members, deep, opts.cutoff_override);
        });
    for (const auto &fs : families) {
        for (const auto &f : fs) {
            std::vector<IsometryClassKey> fam;
            for (const std::size_t idx : f) {
                fam.push_back(keys[idx]);
            }
            std::sort(fam.begin(), fam.end());
            report.families.push_back(std::move(fam));
        }
    }
    std::sort(report.families.begin(), report.families.end());
    if (!report.families.empty()) {
        // Families are sorted by first member, so the first one holds the smallest key.
        report.minimal_pair = {report.families[0][0], report.families[0][1]};
    }
    return report;
}

bool heuristic(const FamilyReport &report)
{
    return report.cutoff < lens::isospectral_cutoff(report.q, report.n);
}

ExistenceTable existence_table(const std::vector<std::size_t> &ns,
                               const std::vector<std::int64_t> &qs,
                               Mode mode,
                               const SearchOptions &opts)
{
    ExistenceTable table;
    table.ns = ns;
    table.qs = qs;
    if (ns.empty() || qs.empty()) {
        return table;
    }
    const std::int64_t qmax = *std::max_element(qs.begin(), qs.end());
    // pair_highest needs every smaller modulus as well.
    std::vector<std::pair<std::size_t, std::int64_t>> tasks;
    for (const std::size_t n : ns) {
        for (std::int64_t q = 3; q <= qmax; ++q) {
            tasks.emplace_back(n, q);
        }
    }
    SearchOptions inner = opts;
    inner.jobs = 1;
    const auto found = parallel_map<char>(tasks.size(), opts.jobs, [&](std::size_t i) {
        const auto [n, q] = tasks[i];
        const std::string key = sweep_key("pair", n, q, mode, opts);
        if (const auto cached = load_checkpoint(opts, key)) {
            return static_cast<char>(*cached == "1");
        }
        const bool any = !find_isospectral_families(n, q, mode, inner).families.empty();
        store_checkpoint(opts, key, any ? "1" : "0");
        return static_cast<char>(any);
    });
    std::map<std::pair<std::size_t, std::int64_t>, bool> has_pair;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        has_pair[tasks[i]] = found[i] != 0;
    }
    for (const std::size_t n : ns) {
        std::vector<Cell> row;
        for (const std::int64_t q : qs) {
            if (q < 3 || !has_pair[{n, q}]) {
                row.push_back(Cell::none);
                continue;
            }
            bool earlier = false;
            for (std::int64_t p = 3; p < q; ++p) {
                earlier = earlier || has_pair[{n, p}];
            }
            row.push_back(earlier ? Cell::pair : Cell::pair_highest);
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

bool is_irreducible(const LensParams &L)
{
    if (L.q < 3) {
        throw PreconditionError("irreducibility undefined");
    }
    std::vector<char> hit(static_cast<std::size_t>(L.q), 0);
    for (const auto x : L.s) {
        hit[static_cast<std::size_t>(modarith::mod(x, L.q))] = 1;
        hit[static_cast<std::size_t>(modarith::mod(-x, L.q))] = 1;
    }
    for (std::int64_t m = 1; m < L.q; ++m) {
        if (std::gcd(m, L.q) == 1 && !hit[static_cast<std::size_t>(m)]) {
            return true;
        }
    }
    return false;
}

LensParams extend_params(const LensParams &L, std::size_t r)
{
    const auto t = modarith::unit_representatives(L.q).reps;
    std::vector<std::int64_t> s = L.s;
    for (std::size_t i = 0; i < r; ++i) {
        s.insert(s.end(), t.begin(), t.end());
    }
    return lens::make_lens(L.q, std::move(s));
}

bool congruence_condition(std::int64_t n)
{
    if (n < 3) {
        throw PreconditionError("congruence_condition needs n >= 3");
    }
    const auto in = [n](std::int64_t m, std::int64_t lo, std::int64_t hi) {
        const std::int64_t r = n % m;
        return lo <= r && r <= hi;
    };
    return n % 4 == 1 || in(5, 1, 3) || in(6, 1, 4) || in(8, 2, 6) || in(9, 2, 7) || in(11, 2, 9);
}

DensityReport density(std::size_t n, std::int64_t x, const SearchOptions &opts)
{
    if (x < 1) {
        throw PreconditionError("density needs x >= 1");
    }
    DensityReport out;
    out.n = n;
    out.x = x;
    SearchOptions inner = opts;
    inner.jobs = 1;
    // Every modulus 1 <= q <= x contributes; this reproduces the published totals.
    const auto counts = parallel_map<std::pair<std::size_t, std::size_t>>(
        static_cast<std::size_t>(x), opts.jobs, [&](std::size_t i) {
            const auto q = static_cast<std::int64_t>(i) + 1;
            const std::string key = sweep_key("density", n, q, Mode::manifold, opts);
            if (const auto cached = load_checkpoint(opts, key)) {
                std::stringstream in(*cached);
                std::size_t total = 0, nonunique = 0;
                in >> total >> nonunique;
                return std::pair{total, nonunique};
            }
            const auto report = find_isospectral_families(n, q, Mode::manifold, inner);
            std::size_t in_families = 0;
            for (const auto &f : report.families) {
                in_families += f.size();
            }
            store_checkpoint(opts, key, std::to_string(report.classes) + " " + std::to_string(in_families));
            return std::pair{report.classes, in_families};
        });
    out.total_count = 0;
    out.nonunique_count = 0;
    for (const auto &[total, nonunique] : counts) {
        out.total_count += static_cast<unsigned long>(total);
        out.nonunique_count += static_cast<unsigned long>(nonunique);
    }
    out.unique_count = out.total_count - out.nonunique_count;
    out.density = out.total_count == 0 ? mpq_class(1) : mpq_class(out.unique_count, out.total_count);
    out.density.canonicalize();
    return out;
}

std::optional<Table1Row> table1_row(const FamilyReport &report)
{
    if (report.q < 3) {
        return std::nullopt;
    }
    std::optional<Table1Row> best;
    for (const auto &family : report.families) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (!is_irreducible(to_lens(family[i]))) {
                continue;
            }
            if (!best || family[i] < best->first) {
                Table1Row row;
                row.q = report.q;
                row.q0 = modarith::totient(report.q) / 2;
                row.n = report.n;
                row.first = family[i];
                row.second = family[i == 0 ? 1 : 0];
                row.family_size = family.size();
                best = row;
            }
            break;  // members are sorted; later ones are larger
        }
    }
    return best;
}

std::vector<Table1Row> table1(std::size_t nmin, std::size_t nmax, std::int64_t qmin, std::int64_t qmax,
                              const SearchOptions &opts)
{
    std::vector<std::pair<std::int64_t, std::size_t>> tasks;
    for (std::int64_t q = std::max<std::int64_t>(qmin, 3); q <= qmax; ++q) {
        for (std::size_t n = nmin; n <= nmax; ++n) {
            tasks.emplace_back(q, n);
        }
    }
    SearchOptions inner = opts;
    inner.jobs = 1;
    const auto rows = parallel_map<std::optional<Table1Row>>(tasks.size(), opts.jobs, [&](std::size_t i) {
        const auto [q, n] = tasks[i];
        const std::string key = sweep_key("table1", n, q, Mode::manifold, opts);
        if (const auto cached = load_checkpoint(opts, key)) {
            if (*cached == "none") {
                return std::optional<Table1Row>{};
            }
            std::stringstream in(*cached);
            std::string size, first, second;
            in >> size >> first >> second;
            return std::optional<Table1Row>{Table1Row{q, modarith::totient(q) / 2, n, decode_key(q, first),
                                                      decode_key(q, second), std::stoul(size)}};
        }
        auto row = table1_row(find_isospectral_families(n, q, Mode::manifold, inner));
        store_checkpoint(opts, key,
                         row ? std::to_string(row->family_size) + " " + encode_key(row->first) + " " +
                                   encode_key(row->second)
                             : std::string("none"));
        return row;
    });
    std::vector<Table1Row> out;
    for (const auto &row : rows) {
        if (row) {
            out.push_back(*row);
        }
    }
    return out;
}

std::string cell_symbol(Cell c)
{
    switch (c) {
    case Cell::none:
        return "-";
    case Cell::pair:
        return "x";
    case Cell::pair_highest:
        return "X";
    }
    return "?";
}

} // namespace lensspec::enumeration
