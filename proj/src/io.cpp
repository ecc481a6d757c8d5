#include "ocsp/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "ocsp/error.hpp"

namespace ocsp::io {
namespace {

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

}  // namespace

Json to_json(const OrderingPredicate& predicate) {
  if (auto name = predicate.name()) return Json{{"named", *name}};
  return Json{{"k", predicate.arity()}, {"satisfied_ranks", predicate.satisfied_ranks()}};
}

OrderingPredicate predicate_from_json(const Json& j) {
  return guarded([&] {
    if (j.contains("named")) return named_predicate(j.at("named").get<std::string>());
    return OrderingPredicate(j.at("k").get<int>(), j.at("satisfied_ranks").get<std::vector<std::uint64_t>>());
  });
}

Json to_json(const OcspInstance& instance) {
  return Json{{"n", instance.num_vars()},
              {"k", instance.arity()},
              {"predicate", to_json(instance.predicate())},
              {"constraints", instance.constraints()}};
}

OcspInstance instance_from_json(const Json& j) {
  return guarded([&] {
    auto predicate = predicate_from_json(j.at("predicate"));
    if (j.contains("k") && j.at("k").get<int>() != predicate.arity()) {
      throw Error(Errc::arity_mismatch, "instance k differs from predicate arity");
    }
    return OcspInstance(j.at("n").get<int>(), std::move(predicate), j.at("constraints").get<std::vector<Tuple>>());
  });
}

Json to_json(const CoarsePredicate& f) {
  if (f.source()) return Json{{"coarsen_of", to_json(*f.source())}, {"q", f.alphabet()}};
  return Json{{"k", f.arity()}, {"q", f.alphabet()}, {"satisfied_base_q", f.satisfied_codes()}};
}

CoarsePredicate coarse_predicate_from_json(const Json& j) {
  return guarded([&] {
    if (j.contains("coarsen_of")) {
      return CoarsePredicate::coarsen(predicate_from_json(j.at("coarsen_of")), j.at("q").get<int>());
    }
    return CoarsePredicate::from_table(j.at("k").get<int>(), j.at("q").get<int>(),
                                       j.at("satisfied_base_q").get<std::vector<std::uint64_t>>());
  });
}

Json to_json(const Partition& b) {
  return Json{{"q", b.alphabet()}, {"labels", std::vector<int>(b.labels().begin(), b.labels().end())}};
}

Json to_json(const Permutation& sigma) { return Json(sigma.image()); }

Json to_json(const SolveReport& report) {
  Json j{{"optimum", to_string(report.optimum)},
         {"optimum_float", to_double(report.optimum)},
         {"explored", report.explored},
         {"mode", report.mode == SolveMode::exact ? "exact" : "heuristic"}};
  if (const auto* sigma = std::get_if<Permutation>(&report.witness)) {
    j["ordering"] = to_json(*sigma);
  } else {
    j["assignment"] = to_json(std::get<Partition>(report.witness));
  }
  return j;
}

Json to_json(const ExpansionCertificate& cert) {
  return Json{{"gamma", to_string(cert.gamma)},
              {"delta_min", to_string(cert.delta_min)},
              {"delta_min_float", to_double(cert.delta_min)},
              {"mode", cert.mode == CertMode::exact ? "exact" : "lower_bound"},
              {"explored", cert.explored},
              {"witness", cert.witness}};
}

OrderingPredicate parse_predicate_arg(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return named_predicate(text);
  int k = 0;
  try {
    k = std::stoi(text.substr(0, colon));
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "bad predicate '" + text + "'");
  }
  std::vector<std::uint64_t> ranks;
  std::stringstream rest(text.substr(colon + 1));
  for (std::string item; std::getline(rest, item, ',');) {
    try {
      ranks.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, "bad rank '" + item + "'");
    }
  }
  return OrderingPredicate(k, std::move(ranks));
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path.string());
  return guarded([&] { return Json::parse(in); });
}

void write_json(const std::filesystem::path& path, const Json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::parse_error, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::filesystem::path secret_path(const std::filesystem::path& instance_path) {
  auto p = instance_path;
  p.replace_extension();
  p += ".secret.json";
  return p;
}

}  // namespace ocsp::io
