#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lensspec/eigen_equiv.hpp"
#include "lensspec/enumeration.hpp"
#include "lensspec/lens.hpp"
#include "lensspec/orbifold.hpp"
#include "lensspec/towers.hpp"

namespace lensspec
{

/// "L(q;s1,...,sn)". Whitespace is allowed anywhere; negative entries are reduced mod q.
lens::LensParams parse_lens(std::string_view text);
std::string format_lens(const lens::LensParams &L);

/// "[1, 2, 3]", the notation of the isospectral-pair tables.
std::string format_key(const lens::IsometryClassKey &key);

/// Integers that fit in 64 bits become JSON numbers; larger ones become decimal strings.
nlohmann::json to_json(const BigInt &x);
nlohmann::json to_json(const std::vector<BigInt> &xs);

/// {q, n, K, counts:[...], mults:[...]}
nlohmann::json to_json(const lens::SpectrumSlice &slice);

nlohmann::json to_json(const lens::IsometryClassKey &key);
nlohmann::json to_json(const enumeration::FamilyReport &report);
nlohmann::json to_json(const enumeration::DensityReport &report);
nlohmann::json to_json(const enumeration::ExistenceTable &table);
nlohmann::json to_json(const enumeration::Table1Row &row);
nlohmann::json to_json(const towers::DdPairReport &report);
/// {r, t, k, a, levels:[{j, t_j, q, M, N, checks:{predicate, congruence, full}}]}
nlohmann::json to_json(const towers::TowerSpec &T, const towers::TowerReport *report = nullptr);
nlohmann::json to_json(const eigen::FinitePartCertificate &cert);
nlohmann::json to_json(const eigen::Example54Report &report);
nlohmann::json to_json(const orbifold::FiniteOrthogonalGroup &G);

/// "p/q", an integer, or a finite decimal such as "0.3".
mpq_class parse_rational(std::string_view text);

/// Exact rational rounded half-up to `digits` decimal places.
std::string format_decimal(const mpq_class &x, int digits);

} // namespace lensspec
