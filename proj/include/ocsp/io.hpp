#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ocsp/coarsening.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/instance.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/solvers.hpp"

namespace ocsp::io {

using Json = nlohmann::json;

/// {"named": "MAS"} for named predicates, else {"k": .., "satisfied_ranks": [..]}.
Json to_json(const OrderingPredicate& predicate);
OrderingPredicate predicate_from_json(const Json& j);

/// {"n", "k", "predicate", "constraints"}.
Json to_json(const OcspInstance& instance);
OcspInstance instance_from_json(const Json& j);

/// {"coarsen_of": <predicate>, "q"} for coarsenings, else
/// {"k", "q", "satisfied_base_q": [..]}.
Json to_json(const CoarsePredicate& f);
CoarsePredicate coarse_predicate_from_json(const Json& j);

Json to_json(const Partition& b);
Json to_json(const Permutation& sigma);
Json to_json(const SolveReport& report);
Json to_json(const ExpansionCertificate& cert);

/// Parses a predicate given on the command line: "MAS", "Btwn" or
/// "k:rank,rank,...".
OrderingPredicate parse_predicate_arg(const std::string& text);

Json read_json_file(const std::filesystem::path& path);
/// Writes `j` followed by a newline; "-" means stdout.
void write_json(const std::filesystem::path& path, const Json& j);

/// "dir/name.json" -> "dir/name.secret.json".
std::filesystem::path secret_path(const std::filesystem::path& instance_path);

}  // namespace ocsp::io
