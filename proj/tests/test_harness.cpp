#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ocsp/experiments.hpp"
#include "ocsp/io.hpp"
#include "ocsp/solvers.hpp"
#include "test_util.hpp"

using namespace ocsp;

namespace {

struct ThreadGuard {
  int saved = omp_get_max_threads();
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

// Small settings so every experiment finishes in well under a second.
ExperimentConfig quick(const std::string& name) {
  auto c = default_config(name);
  c.seed = 17;
  if (name == "value-gap" || name == "expansion" || name == "sphe-gap") c.trials = 12;
  if (name == "reduction-equivalence" || name == "edge-count" || name == "baseline") c.trials = 300;
  if (name == "no-trend") {
    c.trials = 6;
    c.rounds = 8;
  }
  return c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("derived defaults") {
  const auto d = derive_defaults(Rational(1, 2), 2, Rational(1, 4), OrderingPredicate::mas());
  CHECK(d.q0 == 1536);
  CHECK(d.alpha0 == Rational(1, 4));
  CHECK(d.delta_prime == Rational(1, 8));
  CHECK(d.gamma == Rational(1, 768));
  CHECK(d.eta == Rational(1, 8));
  CHECK(d.delta == Rational(32, 768 * 768));
  CHECK(d.t0 == doctest::Approx(t0_formula(2, 1536, 1.0 / 768, 0.125, 0.5, 0.25)));
  CHECK(d.t0 > 0);
  // delta' is always eps/4.
  for (int k = 2; k <= 4; ++k) {
    const auto e = derive_defaults(Rational(3, 10), k, Rational(1, 2 * k), OrderingPredicate::all(k));
    CHECK(e.delta_prime == Rational(3, 40));
    CHECK(e.alpha0 == Rational(1, 2 * k));
  }
  CHECK(derive_defaults(Rational(1, 3), 3, Rational(1, 6), OrderingPredicate::betweenness()).q0 == 5184);
  CHECK_ERRC(derive_defaults(Rational(0), 2, Rational(1, 4), OrderingPredicate::mas()), Errc::invalid_epsilon);
  CHECK_ERRC(derive_defaults(Rational(1), 2, Rational(1, 4), OrderingPredicate::mas()), Errc::invalid_epsilon);
  CHECK_ERRC(derive_defaults(Rational(1, 2), 2, Rational(1, 3), OrderingPredicate::mas()), Errc::invalid_params);
}

TEST_CASE("T0 terms") {
  // First term dominates for small q, the log term for large q.
  const double a = 4 * std::log(2.0) * 4 / (0.25 * 0.25);
  const double b = 8 * (0.5 + 0.125) * 4 * std::log(2.0) / (0.125 * 0.125 * 0.25);
  CHECK(t0_formula(2, 2, 0.5, 0.125, 0.5, 0.25) == doctest::Approx(std::max(a / 0.25, b)));
  // Scaled rounds follow T0 ratios under gamma = 2/q.
  auto c = default_config("no-trend");
  c.rounds = 12;
  CHECK(scaled_rounds(c) == std::vector<int>{12, 96, 576});
  c.qs = {4};
  CHECK(scaled_rounds(c) == std::vector<int>{12});
}

TEST_CASE("config serialization and hashing") {
  const auto a = default_config("value-gap");
  auto b = a;
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  const auto j = a.to_json();
  CHECK(j["name"] == "value-gap");
  CHECK(j["alpha"] == "1/8");
  CHECK(j["pi"] == "[0 1]");
  CHECK_ERRC(default_config("nonsense"), Errc::invalid_params);
  CHECK(experiment_names().size() == 8);
}

TEST_CASE("every CSV starts with the config header") {
  for (const auto& name : experiment_names()) {
    const auto c = quick(name);
    const auto lines = lines_of(run_experiment(c).csv);
    REQUIRE(lines.size() > 5);
    CHECK(lines[0] == "# experiment: " + name);
    CHECK(lines[1] == "# config: " + c.to_json().dump());
    std::ostringstream hash;
    hash << "# config_hash: " << std::hex;
    hash.width(16);
    hash.fill('0');
    hash << config_hash(c);
    CHECK(lines[2] == hash.str());
    CHECK(lines[3].rfind("# versions: ocsp=0.1.0", 0) == 0);
    CHECK(lines[4].find(',') != std::string::npos);
  }
}

TEST_CASE("experiments are byte-identical across thread counts") {
  ThreadGuard guard;
  for (const auto& name : experiment_names()) {
    const auto c = quick(name);
    omp_set_num_threads(1);
    const auto serial = run_experiment(c);
    omp_set_num_threads(4);
    const auto parallel = run_experiment(c);
    CHECK_MESSAGE(serial.csv == parallel.csv, name);
    CHECK(serial.passed == parallel.passed);
  }
}

TEST_CASE("value gap on the planted distribution") {
  auto c = default_config("value-gap");
  const auto r = run_experiment(c);
  CHECK(r.passed);
  CHECK(r.summary["yes_bound_ok"] == r.summary["yes_trials_with_constraints"]);
  CHECK(r.summary["yes_mean"].get<double>() >= 0.75);
  // With one edge per matching only ~2.5 constraints survive, so uniform
  // instances are nearly satisfiable; band from 20 seeds of the exact solver.
  const double no_mean = r.summary["no_mean"].get<double>();
  CHECK(no_mean >= 0.95);
  CHECK(no_mean <= 1.0);
}

TEST_CASE("value gap rejects out-of-range settings") {
  auto c = default_config("value-gap");
  c.n = 11;
  CHECK_ERRC(run_experiment(c), Errc::invalid_params);
  c = default_config("sphe-gap");
  c.gamma = Rational(1, 4);
  CHECK_ERRC(run_experiment(c), Errc::invalid_params);
}

TEST_CASE("expansion experiment") {
  auto c = quick("expansion");
  const auto r = run_experiment(c);
  CHECK(r.passed);
  CHECK(r.summary["relation_ok"] == 12);
  // Zero-constraint trials report 0 for both parameters.
  c.rounds = 1;
  c.q = 3;
  c.trials = 40;
  const auto sparse = run_experiment(c);
  CHECK(sparse.csv.find(",0,0,0,0,1\n") != std::string::npos);
}

TEST_CASE("reduction equivalence and width experiments pass") {
  CHECK(run_experiment(quick("reduction-equivalence")).summary["emission_failures"] == 0);
  const auto w = run_experiment(quick("width"));
  CHECK(w.passed);
  CHECK(w.csv.find("MAS,2,4,3/4,3/4,1,1") != std::string::npos);
  CHECK(w.csv.find("Btwn,3,5,3/5,3/5,1,NA") != std::string::npos);
}

TEST_CASE("io round trips") {
  const OcspInstance inst(5, OrderingPredicate::betweenness(), {{0, 1, 2}, {4, 3, 0}});
  const auto back = io::instance_from_json(io::to_json(inst));
  CHECK(back.num_vars() == 5);
  CHECK(back.constraints() == inst.constraints());
  CHECK(back.predicate().satisfied_ranks() == inst.predicate().satisfied_ranks());

  const auto custom = io::parse_predicate_arg("3:0,5");
  CHECK(custom.satisfied_ranks() == OrderingPredicate::betweenness().satisfied_ranks());
  CHECK(io::predicate_from_json(io::to_json(custom)).satisfied_ranks() == custom.satisfied_ranks());
  CHECK(io::to_json(OrderingPredicate::mas())["named"] == "MAS");
  CHECK_ERRC(io::parse_predicate_arg("3:9"), Errc::invalid_predicate);
  CHECK_ERRC(io::parse_predicate_arg("XYZ"), Errc::parse_error);

  const auto f = CoarsePredicate::coarsen(OrderingPredicate::mas(), 3);
  const auto f_back = io::coarse_predicate_from_json(io::to_json(f));
  CHECK(f_back.satisfied_codes() == f.satisfied_codes());
  const auto table = CoarsePredicate::from_table(2, 2, {1, 2});
  CHECK(io::coarse_predicate_from_json(io::to_json(table)).satisfied_codes() == table.satisfied_codes());

  CHECK_ERRC(io::instance_from_json(io::Json::parse(R"({"n": 3})")), Errc::parse_error);
  CHECK_ERRC(io::instance_from_json(io::Json::parse(R"({"n":3,"k":2,"predicate":{"named":"MAS"},"constraints":[[0,0]]})")),
             Errc::duplicate_entries);

  const auto report = solve_ocsp_exact(OcspInstance(3, OrderingPredicate::mas(), {{0, 1}, {1, 2}, {2, 0}}));
  const auto j = io::to_json(report);
  CHECK(j["optimum"] == "2/3");
  CHECK(j["mode"] == "exact");
  CHECK(j.contains("ordering"));

  CHECK(io::secret_path("dir/x.json") == std::filesystem::path("dir/x.secret.json"));
  const auto tmp = std::filesystem::temp_directory_path() / "ocsp_io_test.json";
  io::write_json(tmp, io::to_json(inst));
  CHECK(io::instance_from_json(io::read_json_file(tmp)).constraints() == inst.constraints());
  std::filesystem::remove(tmp);
  CHECK_ERRC(io::read_json_file(tmp), Errc::parse_error);
}
