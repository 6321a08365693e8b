#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lensspec/eigen_equiv.hpp"
#include "lensspec/enumeration.hpp"
#include "lensspec/lens.hpp"
#include "lensspec/orbifold.hpp"
#include "lensspec/parallel.hpp"
#include "lensspec/properties.hpp"
#include "lensspec/serialize.hpp"
#include "lensspec/towers.hpp"

using nlohmann::json;
using namespace lensspec;

namespace
{

constexpr const char *version_text =
    "lensspec 1.0.0\n"
    "isospectral cutoff: K = q(n(n-1)+1) - 1; for cyclic quotients of S^{2n-1} with group order dividing q,\n"
    "agreement of dim H_k for k <= K forces agreement for every k (degree bound on the spectral\n"
    "generating function's numerator over (1-z^q)^n).";

struct Config
{
    std::string format = "plain";
    std::optional<std::size_t> cutoff_override;
    std::size_t jobs = default_jobs();
    std::optional<std::int64_t> seed;
    std::string workdir;
};

struct Output
{
    json result = json::object();
    json certificates = json::object();
    std::vector<std::string> plain;
    std::vector<std::string> csv;
    bool heuristic = false;
    int exit_code = 0;
};

std::string bool_text(bool b)
{
    return b ? "true" : "false";
}

std::string csv_quote(const std::string &s)
{
    return "\"" + s + "\"";
}

towers::Tuple parse_tuple(const std::string &text)
{
    towers::Tuple out;
    std::string cleaned;
    for (const char c : text) {
        cleaned.push_back(c == '(' || c == ')' || c == '[' || c == ']' ? ' ' : c);
    }
    std::stringstream in(cleaned);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception &) {
            throw ParseError("malformed tuple '" + text + "'");
        }
    }
    if (out.empty()) {
        throw ParseError("empty tuple");
    }
    return out;
}

std::string format_tuple(const towers::Tuple &a)
{
    std::string out = "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += (i ? "," : "") + std::to_string(a[i]);
    }
    return out + ")";
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw PreconditionError("cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string join_bigints(const std::vector<BigInt> &xs, const char *sep)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? sep : "") + xs[i].get_str();
    }
    return out;
}

enumeration::SearchOptions search_options(const Config &cfg)
{
    enumeration::SearchOptions opts;
    opts.cutoff_override = cfg.cutoff_override;
    opts.jobs = cfg.jobs;
    opts.workdir = cfg.workdir;
    return opts;
}

void emit(const std::string &command, const Config &cfg, const Output &out)
{
    if (cfg.format == "json") {
        json config = {
            {"jobs", cfg.jobs},
            {"format", cfg.format},
            {"cutoff_override", cfg.cutoff_override ? json(*cfg.cutoff_override) : json(nullptr)},
            {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)},
        };
        json result = out.result;
        if (out.heuristic) {
            result["stamp"] = "HEURISTIC";
        }
        json envelope = {
            {"command", command},
            {"config", std::move(config)},
            {"result", std::move(result)},
            {"certificates", out.certificates},
        };
        std::cout << envelope.dump(2) << "\n";
        return;
    }
    const bool csv = cfg.format == "csv" && !out.csv.empty();
    const auto &lines = csv ? out.csv : out.plain;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::cout << lines[i];
        // CSV headers are not results.
        if (out.heuristic && !(csv && i == 0)) {
            std::cout << (csv ? ",HEURISTIC" : "  HEURISTIC");
        }
        std::cout << "\n";
    }
}

json cutoff_certificate(std::int64_t q, std::size_t n, std::size_t used)
{
    const std::size_t certified = lens::isospectral_cutoff(q, n);
    return {
        {"certified_cutoff", certified},
        {"used_cutoff", used},
        {"rule", "K = q(n(n-1)+1) - 1"},
        {"complete", used >= certified},
    };
}

Output cmd_isometric(const std::string &a, const std::string &b)
{
    const auto La = parse_lens(a), Lb = parse_lens(b);
    Output out;
    const bool iso = lens::are_isometric(La, Lb);
    out.result = {{"isometric", iso},
                  {"key_a", to_json(lens::canonical_key(La.effective()))},
                  {"key_b", to_json(lens::canonical_key(Lb.effective()))}};
    out.plain = {bool_text(iso)};
    out.csv = {"isometric", bool_text(iso)};
    return out;
}

Output cmd_isospectral(const Config &cfg, const std::string &a, const std::string &b)
{
    const auto La = parse_lens(a), Lb = parse_lens(b);
    const auto d = lens::decide_isospectral(La, Lb, cfg.cutoff_override);
    Output out;
    out.heuristic = d.heuristic;
    out.result = {{"isospectral", d.isospectral}, {"cutoff", d.cutoff}, {"heuristic", d.heuristic}, {"reason", d.reason}};
    if (d.cutoff > 0) {
        out.certificates["cutoff"] = cutoff_certificate(La.effective_order, La.n(), d.cutoff);
    }
    out.plain = {bool_text(d.isospectral) + " cutoff=" + std::to_string(d.cutoff) + " (" + d.reason + ")"};
    out.csv = {"isospectral,cutoff", bool_text(d.isospectral) + "," + std::to_string(d.cutoff)};
    return out;
}

Output cmd_spectrum(const std::string &a, std::size_t K)
{
    const auto L = parse_lens(a);
    const auto slice = lens::spectrum_slice(L, K);
    Output out;
    out.result = to_json(slice);
    out.result["eigenvalues"] = slice.eigenvalues;
    out.plain.push_back("k eigenvalue multiplicity");
    out.csv.push_back("k,eigenvalue,multiplicity,lattice_count");
    for (std::size_t k = 0; k <= K; ++k) {
        out.plain.push_back(std::to_string(k) + " " + std::to_string(slice.eigenvalues[k]) + " " +
                            slice.multiplicities[k].get_str());
        out.csv.push_back(std::to_string(k) + "," + std::to_string(slice.eigenvalues[k]) + "," +
                          slice.multiplicities[k].get_str() + "," + slice.lattice_counts[k].get_str());
    }
    return out;
}

Output cmd_k0(const std::string &a)
{
    const auto L = parse_lens(a);
    const auto k0 = eigen::k0(L);
    Output out;
    out.result = {{"k0", k0 ? json(*k0) : json(nullptr)}, {"n", L.n()}};
    const std::string text = k0 ? std::to_string(*k0) : "absent";
    out.plain = {"k0 = " + text};
    out.csv = {"k0", text};
    return out;
}

Output cmd_eigen_equiv(const std::string &a, const std::string &b)
{
    const auto La = parse_lens(a), Lb = parse_lens(b);
    const auto da = eigen::eigenvalue_spectrum(La), db = eigen::eigenvalue_spectrum(Lb);
    const bool eq = da == db;
    auto k0_json = [](const auto &d) { return d.k0 ? json(*d.k0) : json(nullptr); };
    auto k0_text = [](const auto &d) { return d.k0 ? std::to_string(*d.k0) : std::string("absent"); };
    Output out;
    out.result = {{"eigenvalue_equivalent", eq}, {"k0_a", k0_json(da)}, {"k0_b", k0_json(db)}};
    out.plain = {bool_text(eq) + " k0=" + k0_text(da) + "," + k0_text(db)};
    out.csv = {"eigenvalue_equivalent,k0_a,k0_b", bool_text(eq) + "," + k0_text(da) + "," + k0_text(db)};
    return out;
}

Output cmd_eigen_family(std::size_t n, std::int64_t qmax)
{
    const auto family = eigen::eigenvalue_equivalent_family(n, qmax);
    bool all = true;
    for (const auto &L : family) {
        all = all && eigen::are_eigenvalue_equivalent(L, family.front());
    }
    const auto ratio = eigen::volume_ratio(family);
    Output out;
    auto members = json::array();
    for (const auto &L : family) {
        members.push_back(format_lens(L));
    }
    out.result = {{"members", members}, {"mutually_equivalent", all}, {"volume_ratio", ratio.get_str()}};
    out.plain = {"members: " + std::to_string(family.size()), "mutually equivalent: " + bool_text(all),
                 "volume ratio: " + ratio.get_str()};
    return out;
}

Output cmd_enumerate(std::size_t n, std::int64_t q, bool orbifold)
{
    const auto classes =
        enumeration::enumerate_classes(n, q, orbifold ? enumeration::Mode::orbifold : enumeration::Mode::manifold);
    Output out;
    auto arr = json::array();
    out.csv.push_back("q,n,key");
    for (const auto &key : classes) {
        arr.push_back(to_json(key));
        out.plain.push_back(format_key(key));
        out.csv.push_back(std::to_string(q) + "," + std::to_string(n) + "," + csv_quote(format_key(key)));
    }
    out.result = {{"count", classes.size()}, {"classes", std::move(arr)}};
    out.plain.push_back("count: " + std::to_string(classes.size()));
    return out;
}

Output cmd_search(const Config &cfg, std::size_t n, std::int64_t q, bool orbifold, std::optional<std::size_t> prefix)
{
    auto opts = search_options(cfg);
    opts.prefix = prefix;
    const auto report = enumeration::find_isospectral_families(
        n, q, orbifold ? enumeration::Mode::orbifold : enumeration::Mode::manifold, opts);
    Output out;
    out.heuristic = enumeration::heuristic(report);
    out.result = to_json(report);
    out.certificates["cutoff"] = cutoff_certificate(q, n, report.cutoff);
    out.plain.push_back("classes: " + std::to_string(report.classes));
    out.csv.push_back("q,n,family,member");
    for (std::size_t i = 0; i < report.families.size(); ++i) {
        std::string line = "family:";
        for (std::size_t j = 0; j < report.families[i].size(); ++j) {
            const auto &key = report.families[i][j];
            line += (j ? ", " : " ") + format_key(key);
            out.csv.push_back(std::to_string(q) + "," + std::to_string(n) + "," + std::to_string(i) + "," +
                              csv_quote(format_key(key)));
        }
        out.plain.push_back(line);
    }
    if (report.minimal_pair) {
        out.plain.push_back("minimal pair: " + format_key(report.minimal_pair->first) + ", " +
                            format_key(report.minimal_pair->second));
    } else {
        out.plain.push_back("no isospectral families");
    }
    return out;
}

Output cmd_table1(const Config &cfg, std::size_t nmin, std::size_t nmax, std::int64_t qmin, std::int64_t qmax)
{
    const auto rows = enumeration::table1(nmin, nmax, qmin, qmax, search_options(cfg));
    Output out;
    out.heuristic = cfg.cutoff_override.has_value();
    auto arr = json::array();
    out.csv.push_back("q,q0,n,first,second");
    out.plain.push_back("q  q0  n   parameters");
    for (const auto &row : rows) {
        arr.push_back(to_json(row));
        const std::string members = format_key(row.first) + ", " + format_key(row.second);
        out.csv.push_back(std::to_string(row.q) + "," + std::to_string(row.q0) + "," + std::to_string(row.n) + "," +
                          csv_quote(format_key(row.first)) + "," + csv_quote(format_key(row.second)));
        char prefix[32];
        std::snprintf(prefix, sizeof prefix, "%-3lld%-4lld%-4zu", static_cast<long long>(row.q),
                      static_cast<long long>(row.q0), row.n);
        out.plain.push_back(prefix + members);
    }
    out.result = {{"rows", std::move(arr)}};
    return out;
}

Output cmd_table2(const Config &cfg, std::size_t nmin, std::size_t nmax, const std::vector<std::int64_t> &qs,
                  bool orbifold)
{
    std::vector<std::size_t> ns;
    for (std::size_t n = nmin; n <= nmax; ++n) {
        ns.push_back(n);
    }
    const auto table = enumeration::existence_table(
        ns, qs, orbifold ? enumeration::Mode::orbifold : enumeration::Mode::manifold, search_options(cfg));
    Output out;
    out.heuristic = cfg.cutoff_override.has_value();
    out.result = to_json(table);
    std::string header = "n\\q";
    std::string csv_header = "n";
    for (const auto q : qs) {
        char cell[8];
        std::snprintf(cell, sizeof cell, "%4lld", static_cast<long long>(q));
        header += cell;
        csv_header += "," + std::to_string(q);
    }
    out.plain.push_back(header);
    out.csv.push_back(csv_header);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        char label[8];
        std::snprintf(label, sizeof label, "%-3zu", ns[i]);
        std::string line = label;
        std::string csv = std::to_string(ns[i]);
        for (std::size_t j = 0; j < qs.size(); ++j) {
            const auto c = table.cells[i][j];
            line += "   " + enumeration::cell_symbol(c);
            csv += std::string(",") + (c == enumeration::Cell::none   ? "none"
                                       : c == enumeration::Cell::pair ? "pair"
                                                                      : "pair_highest");
        }
        out.plain.push_back(line);
        out.csv.push_back(csv);
    }
    out.plain.push_back("legend: - none, x pair, X pair at the smallest q with any pair");
    return out;
}

Output cmd_density(const Config &cfg, std::size_t n, std::int64_t x)
{
    const auto report = enumeration::density(n, x, search_options(cfg));
    Output out;
    out.heuristic = cfg.cutoff_override.has_value();
    out.result = to_json(report);
    const std::string d = format_decimal(report.density, 5);
    out.plain = {"n=" + std::to_string(n) + " x=" + std::to_string(x) + " nonunique=" +
                 report.nonunique_count.get_str() + " unique=" + report.unique_count.get_str() +
                 " total=" + report.total_count.get_str() + " density=" + d};
    out.csv = {"n,x,nonunique,total,density", std::to_string(n) + "," + std::to_string(x) + "," +
                                                  report.nonunique_count.get_str() + "," +
                                                  report.total_count.get_str() + "," + d};
    return out;
}

Output cmd_extend(const std::string &a, std::size_t r)
{
    const auto L = parse_lens(a);
    const auto E = enumeration::extend_params(L, r);
    Output out;
    out.result = {{"input", format_lens(L)}, {"extended", format_lens(E)}, {"dimension", E.dimension()},
                  {"key", to_json(lens::canonical_key(E))}};
    out.plain = {format_lens(E)};
    out.csv = {"extended", csv_quote(format_lens(E))};
    return out;
}

Output cmd_congruence(std::int64_t nmin, std::int64_t nmax)
{
    std::vector<std::int64_t> exceptions;
    for (std::int64_t n = nmin; n <= nmax; ++n) {
        if (!enumeration::congruence_condition(n)) {
            exceptions.push_back(n);
        }
    }
    Output out;
    out.result = {{"nmin", nmin}, {"nmax", nmax}, {"exceptions", exceptions}};
    std::string list;
    for (std::size_t i = 0; i < exceptions.size(); ++i) {
        list += (i ? "," : "") + std::to_string(exceptions[i]);
    }
    out.plain = {"exceptions in [" + std::to_string(nmin) + ", " + std::to_string(nmax) + "]: " +
                 (list.empty() ? "none" : list)};
    out.csv = {"n,condition"};
    for (const auto n : exceptions) {
        out.csv.push_back(std::to_string(n) + ",false");
    }
    return out;
}

Output cmd_tower(const Config &cfg, bool verify, std::int64_t r, std::int64_t t, std::int64_t k,
                 const std::string &tuple, std::size_t depth, std::size_t full_depth)
{
    const auto T = towers::build_tower(r, t, k, parse_tuple(tuple), depth);
    Output out;
    if (!verify) {
        out.result = to_json(T);
        for (const auto &level : T.levels) {
            out.plain.push_back("j=" + std::to_string(level.j) + " t_j=" + std::to_string(level.t_j) + " " +
                                format_lens(level.M) + " " + format_lens(level.N));
        }
        return out;
    }
    const auto report = towers::verify_tower(T, full_depth, cfg.jobs);
    out.result = to_json(T, &report);
    out.csv.push_back("j,t_j,q,predicate,congruence,full");
    for (std::size_t i = 0; i < T.levels.size(); ++i) {
        const auto &c = report.levels[i];
        const std::string full = c.full ? bool_text(*c.full) + " (K=" + std::to_string(c.full_cutoff) + ")" : "skipped";
        out.plain.push_back("level " + std::to_string(c.j) + ": q=" + std::to_string(T.levels[i].M.q) +
                            " predicate=" + bool_text(c.predicate) + " congruence=" + bool_text(c.congruence) +
                            " full=" + full);
        out.csv.push_back(std::to_string(c.j) + "," + std::to_string(T.levels[i].t_j) + "," +
                          std::to_string(T.levels[i].M.q) + "," + bool_text(c.predicate) + "," +
                          bool_text(c.congruence) + "," + (c.full ? bool_text(*c.full) : "skipped"));
    }
    for (const auto &f : report.failures) {
        out.plain.push_back("failure at level " + std::to_string(f.level) + " [" + f.check + "]: " + f.witness);
    }
    out.plain.push_back(std::string("tower ") + (report.ok ? "verified" : "FAILED"));
    return out;
}

Output cmd_dd_check(const Config &cfg, std::int64_t r, std::int64_t t, const std::string &tuple, std::int64_t table_max)
{
    const auto a = parse_tuple(tuple);
    Output out;
    auto table = json::array();
    out.plain.push_back("r  univalent  self_reversing  reversible  good  hereditarily_good  useful");
    out.csv.push_back("r,univalent,self_reversing,reversible,good,hereditarily_good,useful");
    for (std::int64_t rr = 1; rr <= std::max(table_max, std::int64_t{0}); ++rr) {
        const bool u = towers::is_univalent(a, rr), sr = towers::is_self_reversing(a, rr),
                   rev = towers::is_reversible(a, rr), g = towers::is_good(a, rr),
                   hg = towers::is_hereditarily_good(a, rr), use = towers::is_useful(a, rr);
        table.push_back({{"r", rr}, {"univalent", u}, {"self_reversing", sr}, {"reversible", rev}, {"good", g},
                         {"hereditarily_good", hg}, {"useful", use}});
        char line[128];
        std::snprintf(line, sizeof line, "%-3lld%-11s%-16s%-12s%-6s%-19s%s", static_cast<long long>(rr),
                      bool_text(u).c_str(), bool_text(sr).c_str(), bool_text(rev).c_str(), bool_text(g).c_str(),
                      bool_text(hg).c_str(), bool_text(use).c_str());
        out.plain.push_back(line);
        out.csv.push_back(std::to_string(rr) + "," + bool_text(u) + "," + bool_text(sr) + "," + bool_text(rev) + "," +
                          bool_text(g) + "," + bool_text(hg) + "," + bool_text(use));
    }
    const auto report = towers::dd_pair_check(r, t, a, cfg.cutoff_override);
    out.heuristic = report.heuristic;
    out.result = {{"a", a}, {"r", r}, {"t", t}, {"predicates", std::move(table)}, {"pair", to_json(report)}};
    out.certificates["cutoff"] = cutoff_certificate(report.M.effective_order, report.M.n(), report.cutoff);
    out.plain.push_back("pair " + format_lens(report.M) + " " + format_lens(report.N) + ": isospectral=" +
                        bool_text(report.isospectral) + " isometric=" + bool_text(report.isometric) +
                        " cutoff=" + std::to_string(report.cutoff));
    if (!report.consistent) {
        out.plain.push_back("INCONSISTENT with the tuple predicates");
    }
    return out;
}

Output cmd_gassmann(std::size_t d, std::size_t K)
{
    const auto [G1, G2] = orbifold::gassmann_pair(d);
    const bool almost = orbifold::almost_conjugate(G1, G2);
    const auto s1 = orbifold::orbifold_spectrum_slice(G1, K);
    const auto s2 = orbifold::orbifold_spectrum_slice(G2, K);
    const auto dist = orbifold::distinguish(G1, G2);
    auto fp_json = [](const orbifold::ConjugacyFingerprint &fp) {
        auto arr = json::array();
        for (const auto &p : fp) {
            arr.push_back(orbifold::format_poly(p));
        }
        return arr;
    };
    Output out;
    out.result = {
        {"d", d},
        {"G1", to_json(G1)},
        {"G2", to_json(G2)},
        {"fingerprint_G1", fp_json(orbifold::char_fingerprint(G1))},
        {"fingerprint_G2", fp_json(orbifold::char_fingerprint(G2))},
        {"almost_conjugate", almost},
        {"fixed_space_dim", {orbifold::fixed_space_dim(G1), orbifold::fixed_space_dim(G2)}},
        {"fixed_coordinate_count", {orbifold::fixed_coordinate_count(G1), orbifold::fixed_coordinate_count(G2)}},
        {"slices_agree", s1 == s2},
        {"max_k", K},
        {"verdict", orbifold::verdict_name(dist.verdict)},
        {"verdict_reason", dist.reason},
    };
    out.plain = {
        "almost conjugate: " + bool_text(almost),
        "fixed space dims: " + std::to_string(orbifold::fixed_space_dim(G1)) + ", " +
            std::to_string(orbifold::fixed_space_dim(G2)),
        "fixed coordinate counts: " + std::to_string(orbifold::fixed_coordinate_count(G1)) + ", " +
            std::to_string(orbifold::fixed_coordinate_count(G2)),
        "spectra agree for k <= " + std::to_string(K) + ": " + bool_text(s1 == s2),
        "conjugacy: " + orbifold::verdict_name(dist.verdict) + " (" + dist.reason + ")",
    };
    return out;
}

Output cmd_orbifold_spectrum(const std::string &path, std::size_t K, std::size_t max_order)
{
    const auto G = orbifold::generate_group(orbifold::parse_generators(read_file(path)), max_order);
    const auto slice = orbifold::orbifold_spectrum_slice(G, K);
    Output out;
    out.result = {{"order", G.order()}, {"m", G.m}, {"slice", to_json(slice)}};
    out.plain = {"order " + std::to_string(G.order()), join_bigints(slice, " ")};
    out.csv = {"k,multiplicity"};
    for (std::size_t k = 0; k < slice.size(); ++k) {
        out.csv.push_back(std::to_string(k) + "," + slice[k].get_str());
    }
    return out;
}

Output cmd_orbifold_distinguish(const std::string &a, const std::string &b, std::size_t max_order)
{
    const auto G1 = orbifold::generate_group(orbifold::parse_generators(read_file(a)), max_order);
    const auto G2 = orbifold::generate_group(orbifold::parse_generators(read_file(b)), max_order);
    const auto d = orbifold::distinguish(G1, G2);
    Output out;
    out.result = {{"verdict", orbifold::verdict_name(d.verdict)}, {"reason", d.reason},
                  {"almost_conjugate", G1.m == G2.m && orbifold::almost_conjugate(G1, G2)}};
    out.plain = {orbifold::verdict_name(d.verdict) + " (" + d.reason + ")"};
    return out;
}

Output cmd_orbifold_unique(std::size_t d, int order, std::size_t K)
{
    const bool unique = orbifold::small_order_uniqueness(d, order, K);
    Output out;
    out.result = {{"d", d}, {"order", order}, {"max_k", K}, {"classes", orbifold::small_order_classes(d, order).size()},
                  {"unique", unique}};
    out.plain = {bool_text(unique)};
    out.csv = {"d,order,K,unique", std::to_string(d) + "," + std::to_string(order) + "," + std::to_string(K) + "," +
                                       bool_text(unique)};
    return out;
}

Output cmd_finite_part(std::size_t n, const std::string &eps)
{
    const auto cert = eigen::finite_part_bound(n, parse_rational(eps));
    Output out;
    out.result = to_json(cert);
    out.plain = {"q=" + cert.q.get_str() + " K=" + cert.K.get_str() + " N=" + cert.N.get_str()};
    out.csv = {"n,epsilon,q,K,N",
               std::to_string(n) + "," + cert.epsilon.get_str() + "," + cert.q.get_str() + "," + cert.K.get_str() +
                   "," + cert.N.get_str()};
    return out;
}

Output cmd_example54(std::size_t N)
{
    const auto r = eigen::example_5_4(N);
    Output out;
    out.result = to_json(r);
    out.plain = {"q=" + std::to_string(r.q) + " " + format_lens(r.L1) + " " + format_lens(r.L2),
                 "first eigenvalues agree: " + r.agree_count.get_str() + " terms (promised " +
                     r.promised_prefix.get_str() + "), multiplicities first differ at k=" +
                     std::to_string(r.first_divergent_k),
                 "isospectral: " + bool_text(r.isospectral) + " isometric: " + bool_text(r.isometric)};
    return out;
}

Output cmd_useful_tuple(std::size_t n, std::int64_t r)
{
    const auto a = towers::useful_tuple(n, r);
    Output out;
    out.result = {{"a", a}, {"r", r}};
    out.plain = {format_tuple(a)};
    return out;
}

Output cmd_shift(std::int64_t r, const std::string &tuple)
{
    const auto a = parse_tuple(tuple);
    const auto b = towers::shift_to_zero_sum(a, r);
    Output out;
    out.result = {{"a", a}, {"b", b}, {"r", r}};
    out.plain = {format_tuple(b)};
    return out;
}

Output cmd_selfcheck(const Config &cfg, std::size_t cases)
{
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.seed.value_or(1));
    Output out;
    out.result["seed"] = seed;
    out.result["properties"] = json::array();
    out.csv = {"property,cases,failures,counterexample"};
    std::size_t failures = 0;
    for (const auto &p : properties::run_all(seed, cases)) {
        out.result["properties"].push_back(
            {{"name", p.name}, {"cases", p.cases}, {"failures", p.failures}, {"counterexample", p.counterexample}});
        out.plain.push_back(p.name + ": " + std::to_string(p.cases - p.failures) + "/" + std::to_string(p.cases) +
                            (p.failures ? "  first failure " + p.counterexample : ""));
        out.csv.push_back(csv_quote(p.name) + "," + std::to_string(p.cases) + "," + std::to_string(p.failures) + "," +
                          csv_quote(p.counterexample));
        failures += p.failures;
    }
    out.exit_code = failures > 0 ? 1 : 0;
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Spectra of lens spaces and spherical orbifolds"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(version_text));
    Config cfg;
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "plain"}))
        ->capture_default_str();
    app.add_option("--cutoff-override", cfg.cutoff_override,
                   "Compare spectra only up to this degree; results below the certified cutoff are HEURISTIC");
    app.add_option("--jobs", cfg.jobs, "Worker threads (default: LENSSPEC_JOBS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Seed for randomized subcommands");
    app.add_option("--workdir", cfg.workdir, "Checkpoint directory for table sweeps");

    std::function<Output()> run;
    std::string command;
    auto bind = [&](CLI::App *sub, std::function<Output()> fn) {
        sub->callback([&, sub, fn] {
            command = sub->get_name();
            for (auto *parent = sub->get_parent(); parent && parent != &app; parent = parent->get_parent()) {
                command = parent->get_name() + " " + command;
            }
            run = fn;
        });
    };

    std::string lit_a, lit_b;
    std::size_t n = 0, depth = 0, full_depth = 1, max_k = 0, count = 0, d = 0;
    std::int64_t q = 0, r = 0, t = 0, k = 0, x = 0, table_max = 0;
    std::size_t nmin = 3, nmax = 14, max_order = 100000;
    std::int64_t qmin = 3, qmax = 23, cnmin = 3, cnmax = 1000;
    std::vector<std::int64_t> qs{11, 13, 16, 17, 19, 20, 21, 22, 23};
    std::string tuple, path_a, path_b, eps;
    bool orbifold_mode = false;
    std::optional<std::size_t> prefix;
    int order = 2;

    auto *iso = app.add_subcommand("isometric", "Decide isometry of two lens spaces");
    iso->add_option("A", lit_a)->required();
    iso->add_option("B", lit_b)->required();
    bind(iso, [&] { return cmd_isometric(lit_a, lit_b); });

    auto *spec = app.add_subcommand("isospectral", "Decide isospectrality at the certified cutoff");
    spec->add_option("A", lit_a)->required();
    spec->add_option("B", lit_b)->required();
    bind(spec, [&] { return cmd_isospectral(cfg, lit_a, lit_b); });

    auto *spectrum = app.add_subcommand("spectrum", "Multiplicities dim H_k for k <= max-k");
    spectrum->add_option("L", lit_a)->required();
    spectrum->add_option("--max-k", max_k)->required();
    bind(spectrum, [&] { return cmd_spectrum(lit_a, max_k); });

    auto *k0 = app.add_subcommand("k0", "Minimal odd one-norm of the congruence lattice");
    k0->add_option("L", lit_a)->required();
    bind(k0, [&] { return cmd_k0(lit_a); });

    auto *eeq = app.add_subcommand("eigen-equiv", "Decide eigenvalue equivalence");
    eeq->add_option("A", lit_a)->required();
    eeq->add_option("B", lit_b)->required();
    bind(eeq, [&] { return cmd_eigen_equiv(lit_a, lit_b); });

    auto *efam = app.add_subcommand("eigen-family", "The family L(q;1,...,1,2), 3 <= q <= qmax");
    efam->add_option("n", n)->required();
    efam->add_option("qmax", q)->required();
    bind(efam, [&] { return cmd_eigen_family(n, q); });

    auto *en = app.add_subcommand("enumerate", "List isometry classes");
    en->add_option("n", n)->required();
    en->add_option("q", q)->required();
    en->add_flag("--orbifold", orbifold_mode);
    bind(en, [&] { return cmd_enumerate(n, q, orbifold_mode); });

    auto *search = app.add_subcommand("search", "Find isospectral families");
    search->add_option("n", n)->required();
    search->add_option("q", q)->required();
    search->add_flag("--orbifold", orbifold_mode);
    search->add_option("--prefix", prefix, "Bucketing cutoff (default 2n+10)");
    bind(search, [&] { return cmd_search(cfg, n, q, orbifold_mode, prefix); });

    auto *t1 = app.add_subcommand("table1", "Minimal irreducible isospectral pairs");
    t1->add_option("--nmin", nmin)->capture_default_str();
    t1->add_option("--nmax", nmax)->capture_default_str();
    t1->add_option("--qmin", qmin)->capture_default_str();
    t1->add_option("--qmax", qmax)->capture_default_str();
    bind(t1, [&] { return cmd_table1(cfg, nmin, nmax, qmin, qmax); });

    auto *t2 = app.add_subcommand("table2", "Existence grid of isospectral pairs");
    t2->add_option("--nmin", nmin)->capture_default_str();
    t2->add_option("--nmax", nmax)->capture_default_str();
    t2->add_option("--qs", qs, "Moduli (columns)")->delimiter(',')->capture_default_str();
    t2->add_flag("--orbifold", orbifold_mode);
    bind(t2, [&] { return cmd_table2(cfg, nmin, nmax, qs, orbifold_mode); });

    auto *dens = app.add_subcommand("density", "Density of spectrally unique lens spaces");
    dens->add_option("n", n)->required();
    dens->add_option("x", x)->required();
    bind(dens, [&] { return cmd_density(cfg, n, x); });

    auto *ext = app.add_subcommand("extend", "Append r copies of t(q)");
    ext->add_option("L", lit_a)->required();
    ext->add_option("r", count)->required();
    bind(ext, [&] { return cmd_extend(lit_a, count); });

    auto *cong = app.add_subcommand("congruence", "List n failing every congruence condition");
    cong->add_option("--nmin", cnmin)->capture_default_str();
    cong->add_option("--nmax", cnmax)->capture_default_str();
    bind(cong, [&] { return cmd_congruence(cnmin, cnmax); });

    auto *tower = app.add_subcommand("tower", "Isospectral towers");
    tower->require_subcommand(1);
    tower->fallthrough();
    for (const bool verify : {false, true}) {
        auto *sub = tower->add_subcommand(verify ? "verify" : "build", verify ? "Verify a tower" : "Build a tower");
        sub->add_option("r", r)->required();
        sub->add_option("t", t)->required();
        sub->add_option("k", k)->required();
        sub->add_option("a", tuple, "Tuple such as 1,2,8")->required();
        sub->add_option("depth", depth)->required();
        if (verify) {
            sub->add_option("--full-depth", full_depth, "Levels certified at the full cutoff")->capture_default_str();
        }
        bind(sub, [&, verify] { return cmd_tower(cfg, verify, r, t, k, tuple, depth, full_depth); });
    }

    auto *dd = app.add_subcommand("dd-check", "Tuple predicates and the L(r,t,+-a) pair");
    dd->add_option("r", r)->required();
    dd->add_option("t", t)->required();
    dd->add_option("a", tuple)->required();
    dd->add_option("--table-max", table_max, "Print predicates for every modulus up to this (default r)");
    bind(dd, [&] { return cmd_dd_check(cfg, r, t, tuple, table_max > 0 ? table_max : r); });

    auto *ut = app.add_subcommand("useful-tuple", "(1, ..., n-1, r - n(n-1)/2)");
    ut->add_option("n", n)->required();
    ut->add_option("r", r)->required();
    bind(ut, [&] { return cmd_useful_tuple(n, r); });

    auto *shift = app.add_subcommand("shift", "Shift a useful tuple to zero entry sum");
    shift->add_option("r", r)->required();
    shift->add_option("a", tuple)->required();
    bind(shift, [&] { return cmd_shift(r, tuple); });

    auto *orb = app.add_subcommand("orbifold", "Signed-permutation groups");
    orb->require_subcommand(1);
    orb->fallthrough();
    auto *gas = orb->add_subcommand("gassmann", "The order-4 almost conjugate pair in O(d+1)");
    gas->add_option("d", d)->required();
    gas->add_option("--max-k", max_k = 50)->capture_default_str();
    bind(gas, [&] { return cmd_gassmann(d, max_k); });
    auto *ospec = orb->add_subcommand("spectrum", "Spectrum slice of the group generated by a file");
    ospec->add_option("groupfile", path_a)->required();
    ospec->add_option("K", max_k)->required();
    ospec->add_option("--max-order", max_order)->capture_default_str();
    bind(ospec, [&] { return cmd_orbifold_spectrum(path_a, max_k, max_order); });
    auto *odist = orb->add_subcommand("distinguish", "Decide conjugacy of two generated groups when possible");
    odist->add_option("A", path_a)->required();
    odist->add_option("B", path_b)->required();
    odist->add_option("--max-order", max_order)->capture_default_str();
    bind(odist, [&] { return cmd_orbifold_distinguish(path_a, path_b, max_order); });
    auto *ouniq = orb->add_subcommand("unique", "Spectral uniqueness of order-2 or order-3 quotients");
    ouniq->add_option("d", d)->required();
    ouniq->add_option("order", order)->required()->check(CLI::IsMember({2, 3}));
    ouniq->add_option("K", max_k)->required();
    bind(ouniq, [&] { return cmd_orbifold_unique(d, order, max_k); });

    auto *fp = app.add_subcommand("finite-part", "How many eigenvalues decide isospectrality above volume epsilon");
    fp->add_option("n", n)->required();
    fp->add_option("epsilon", eps)->required();
    bind(fp, [&] { return cmd_finite_part(n, eps); });

    auto *ex = app.add_subcommand("example54", "Long common eigenvalue prefix of a non-isospectral pair");
    ex->add_option("N", count)->required();
    bind(ex, [&] { return cmd_example54(count); });

    auto *self = app.add_subcommand("selfcheck", "Randomized property checks under --seed");
    std::size_t cases = 100;
    self->add_option("--cases", cases, "Cases per property")->capture_default_str();
    bind(self, [&] { return cmd_selfcheck(cfg, cases); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }
    try {
        const Output out = run();
        emit(command, cfg, out);
        return out.exit_code;
    } catch (const InvariantViolation &e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
