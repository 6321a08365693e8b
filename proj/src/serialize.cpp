#include "lensspec/serialize.hpp"

#include <cctype>
#include <charconv>
#include <limits>

namespace lensspec
{

namespace
{

std::string strip_spaces(std::string_view text)
{
    std::string out;
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(c);
        }
    }
    return out;
}

std::int64_t parse_int(std::string_view token, std::string_view context)
{
    std::int64_t value = 0;
    const auto *first = token.data();
    const auto *last = token.data() + token.size();
    if (!token.empty() && token.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("malformed integer '" + std::string(token) + "' in " + std::string(context));
    }
    return value;
}

} // namespace

lens::LensParams parse_lens(std::string_view text)
{
    const std::string compact = strip_spaces(text);
    const std::string_view view = compact;
    const auto fail = [&](const char *why) {
        return ParseError("malformed lens literal '" + std::string(text) + "': " + why);
    };
    if (view.size() < 6 || view.substr(0, 2) != "L(" || view.back() != ')') {
        throw fail("expected L(q;s1,...,sn)");
    }
    const std::string_view body = view.substr(2, view.size() - 3);
    const auto semi = body.find(';');
    if (semi == std::string_view::npos) {
        throw fail("missing ';'");
    }
    const std::int64_t q = parse_int(body.substr(0, semi), "lens modulus");
    if (q < 1) {
        throw fail("modulus must be positive");
    }
    std::vector<std::int64_t> s;
    std::string_view rest = body.substr(semi + 1);
    while (true) {
        const auto comma = rest.find(',');
        s.push_back(parse_int(rest.substr(0, comma), "lens parameters"));
        if (comma == std::string_view::npos) {
            break;
        }
        rest = rest.substr(comma + 1);
    }
    if (s.size() < 2) {
        throw fail("dimension below 3 unsupported");
    }
    return lens::make_lens(q, std::move(s));
}

std::string format_lens(const lens::LensParams &L)
{
    std::string out = "L(" + std::to_string(L.q) + ";";
    for (std::size_t i = 0; i < L.s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(L.s[i]);
    }
    return out + ")";
}

std::string format_key(const lens::IsometryClassKey &key)
{
    std::string out = "[";
    for (std::size_t i = 0; i < key.canonical_s.size(); ++i) {
        out += (i ? ", " : "") + std::to_string(key.canonical_s[i]);
    }
    return out + "]";
}

nlohmann::json to_json(const BigInt &x)
{
    if (x >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64) {
        std::uint64_t v = 0;
        mpz_export(&v, nullptr, -1, sizeof v, 0, 0, x.get_mpz_t());
        return v;
    }
    if (x < 0 && x.fits_slong_p()) {
        return static_cast<std::int64_t>(x.get_si());
    }
    return x.get_str();
}

nlohmann::json to_json(const std::vector<BigInt> &xs)
{
    auto arr = nlohmann::json::array();
    for (const auto &x : xs) {
        arr.push_back(to_json(x));
    }
    return arr;
}

nlohmann::json to_json(const lens::SpectrumSlice &slice)
{
    return {
        {"q", slice.q},
        {"n", slice.n},
        {"K", slice.K},
        {"counts", to_json(slice.lattice_counts)},
        {"mults", to_json(slice.multiplicities)},
    };
}

nlohmann::json to_json(const lens::IsometryClassKey &key)
{
    return key.canonical_s;
}

nlohmann::json to_json(const enumeration::FamilyReport &report)
{
    auto families = nlohmann::json::array();
    for (const auto &f : report.families) {
        auto members = nlohmann::json::array();
        for (const auto &key : f) {
            members.push_back(to_json(key));
        }
        families.push_back(std::move(members));
    }
    nlohmann::json out = {
        {"n", report.n},
        {"q", report.q},
        {"mode", report.mode == enumeration::Mode::manifold ? "manifold" : "orbifold"},
        {"classes", report.classes},
        {"prefix", report.prefix},
        {"cutoff", report.cutoff},
        {"heuristic", enumeration::heuristic(report)},
        {"families", std::move(families)},
        {"minimal_pair", nullptr},
    };
    if (report.minimal_pair) {
        out["minimal_pair"] = {to_json(report.minimal_pair->first), to_json(report.minimal_pair->second)};
    }
    return out;
}

nlohmann::json to_json(const enumeration::DensityReport &report)
{
    return {
        {"n", report.n},
        {"x", report.x},
        {"unique_count", to_json(report.unique_count)},
        {"nonunique_count", to_json(report.nonunique_count)},
        {"total_count", to_json(report.total_count)},
        {"density", report.density.get_str()},
        {"density_5dp", format_decimal(report.density, 5)},
    };
}

nlohmann::json to_json(const enumeration::ExistenceTable &table)
{
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < table.ns.size(); ++i) {
        nlohmann::json cells = nlohmann::json::object();
        for (std::size_t j = 0; j < table.qs.size(); ++j) {
            const auto c = table.cells[i][j];
            cells[std::to_string(table.qs[j])] = c == enumeration::Cell::none   ? "none"
                                                 : c == enumeration::Cell::pair ? "pair"
                                                                                : "pair_highest";
        }
        rows.push_back({{"n", table.ns[i]}, {"cells", std::move(cells)}});
    }
    return {{"qs", table.qs}, {"rows", std::move(rows)}};
}

nlohmann::json to_json(const enumeration::Table1Row &row)
{
    return {
        {"q", row.q},
        {"q0", row.q0},
        {"n", row.n},
        {"members", {to_json(row.first), to_json(row.second)}},
        {"family_size", row.family_size},
    };
}

nlohmann::json to_json(const towers::DdPairReport &report)
{
    return {
        {"M", format_lens(report.M)},
        {"N", format_lens(report.N)},
        {"isospectral", report.isospectral},
        {"isometric", report.isometric},
        {"cutoff", report.cutoff},
        {"heuristic", report.heuristic},
        {"hereditarily_good", report.hereditarily_good},
        {"reversible", report.reversible},
        {"consistent", report.consistent},
    };
}

nlohmann::json to_json(const towers::TowerSpec &T, const towers::TowerReport *report)
{
    auto levels = nlohmann::json::array();
    for (std::size_t i = 0; i < T.levels.size(); ++i) {
        const auto &level = T.levels[i];
        nlohmann::json entry = {
            {"j", level.j},
            {"t_j", level.t_j},
            {"q", level.M.q},
            {"M", format_lens(level.M)},
            {"N", format_lens(level.N)},
        };
        if (report != nullptr && i < report->levels.size()) {
            const auto &c = report->levels[i];
            entry["checks"] = {
                {"predicate", c.predicate},
                {"congruence", c.congruence},
                {"full", c.full ? nlohmann::json(*c.full) : nlohmann::json(nullptr)},
            };
            if (c.full) {
                entry["full_cutoff"] = c.full_cutoff;
            }
        }
        levels.push_back(std::move(entry));
    }
    nlohmann::json out = {{"r", T.r}, {"t", T.t}, {"k", T.k}, {"a", T.a}, {"levels", std::move(levels)}};
    if (report != nullptr) {
        auto failures = nlohmann::json::array();
        for (const auto &f : report->failures) {
            failures.push_back({{"level", f.level}, {"check", f.check}, {"witness", f.witness}});
        }
        out["ok"] = report->ok;
        out["failures"] = std::move(failures);
    }
    return out;
}

nlohmann::json to_json(const eigen::FinitePartCertificate &cert)
{
    return {
        {"epsilon", cert.epsilon.get_str()},
        {"q", to_json(cert.q)},
        {"K", to_json(cert.K)},
        {"N", to_json(cert.N)},
    };
}

nlohmann::json to_json(const eigen::Example54Report &report)
{
    return {
        {"q", report.q},
        {"L1", format_lens(report.L1)},
        {"L2", format_lens(report.L2)},
        {"agree_count", to_json(report.agree_count)},
        {"promised_prefix", to_json(report.promised_prefix)},
        {"first_divergent_k", report.first_divergent_k},
        {"isospectral", report.isospectral},
        {"isometric", report.isometric},
    };
}

nlohmann::json to_json(const orbifold::FiniteOrthogonalGroup &G)
{
    auto elements = nlohmann::json::array();
    for (const auto &g : G.elements) {
        elements.push_back(orbifold::format_matrix(g));
    }
    return {{"m", G.m}, {"order", G.order()}, {"elements", std::move(elements)}};
}

mpq_class parse_rational(std::string_view text)
{
    const std::string compact = strip_spaces(text);
    mpq_class out;
    const auto slash = compact.find('/');
    const auto dot = compact.find('.');
    try {
        if (slash != std::string::npos) {
            out = mpq_class(mpz_class(compact.substr(0, slash)), mpz_class(compact.substr(slash + 1)));
        } else if (dot != std::string::npos) {
            const std::string whole = compact.substr(0, dot);
            const std::string frac = compact.substr(dot + 1);
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
            const bool negative = !whole.empty() && whole.front() == '-';
            const mpz_class w(whole.empty() || whole == "-" ? "0" : whole);
            const mpz_class f(frac.empty() ? "0" : frac);
            const mpz_class mag = abs(w) * scale + f;
            out = mpq_class(negative ? mpz_class(-mag) : mag, scale);
        } else {
            out = mpq_class(mpz_class(compact));
        }
    } catch (const std::invalid_argument &) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    if (out.get_den() == 0) {
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    }
    out.canonicalize();
    return out;
}

std::string format_decimal(const mpq_class &x, int digits)
{
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const bool negative = x < 0;
    const mpq_class mag = negative ? mpq_class(-x) : x;
    // floor(mag * 10^digits + 1/2)
    const mpz_class num = mag.get_num() * scale * 2 + mag.get_den();
    const mpz_class den = mag.get_den() * 2;
    const mpz_class rounded = num / den;
    const mpz_class whole = rounded / scale;
    std::string frac = mpz_class(rounded % scale).get_str();
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    std::string out = (negative && rounded != 0 ? "-" : "") + whole.get_str();
    if (digits > 0) {
        out += "." + frac;
    }
    return out;
}

} // namespace lensspec
