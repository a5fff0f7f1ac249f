#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "freenorm/harness.hpp"
#include "freenorm/random.hpp"

using namespace freenorm;

TEST_CASE("config parsing is strict") {
  const Config cfg = Config::parse_text(
      "# header comment\n"
      "suite = voiculescu\n"
      "seeds = 0..3, 7\n"
      "model.N = 64   # inline comment\n"
      "model.slack = 0.1\n"
      "with_sigma = false\n");
  CHECK(cfg.get_string("suite", "") == "voiculescu");
  CHECK(cfg.get_u64s("seeds", "") == std::vector<std::uint64_t>{0, 1, 2, 3, 7});
  CHECK(cfg.get_int("model.N", 0) == 64);
  CHECK(cfg.get_double("model.slack", 0.0) == doctest::Approx(0.1));
  CHECK_FALSE(cfg.get_bool("with_sigma", true));
  CHECK(cfg.get_int("model.trials", 20) == 20);  // fallback
  cfg.validate_keys();

  CHECK_THROWS_AS(Config::parse_text("model.N = 1\nmodel.N = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_text("just a line\n"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_text("nope = 1\n").validate_keys(), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_text("model.N = 12x\n").get_int("model.N", 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_text("K = 2,4\n").get_int("K", 0), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_text("seeds = 5..2\n").get_u64s("seeds", ""),
                  std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_text("timing = maybe\n").get_bool("timing", false),
                  std::invalid_argument);
}

TEST_CASE("typed sub-configurations") {
  const Config cfg = Config::parse_text(
      "model.N = 48\n"
      "model.seed = 9\n"
      "solver.max_iter = 123\n"
      "solver.eps_end = 1e-6\n");
  const ModelConfig model = model_config_from(cfg);
  CHECK(model.N == 48);
  CHECK(model.seed == 9);
  CHECK(model.trials == 20);
  const SolverConfig solver = solver_config_from(cfg);
  CHECK(solver.max_iter == 123);
  CHECK(solver.eps_end == doctest::Approx(1e-6));

  const std::vector<SymmetricSpace> grid = space_grid_from(
      Config{}, "lp:1,lp:1.5,lp:2,lp:3,lp:inf,l1+tlinf:0.1,l1+tlinf:1,l1+tlinf:10");
  CHECK(grid.size() == 8);
  CHECK(grid[4].descriptor() == "lp:inf");
  CHECK_THROWS_AS(space_grid_from(Config::parse_text("spaces =\n"), "lp:2"),
                  std::invalid_argument);
  CHECK_THROWS_AS(space_grid_from(Config::parse_text("spaces = lp:nope\n"), "lp:2"),
                  std::invalid_argument);
  CHECK_THROWS_AS(model_config_from(Config::parse_text("model.N = 0\n")),
                  std::invalid_argument);
}

TEST_CASE("csv and plotdata emission") {
  CHECK(to_csv({}) == "experiment,instance,seed,quantity,lhs,rhs,constant,slack,pass,ms\n");

  ReportRow bad = make_bound_row("e,x", "i0", 3, "q", 2.0, 1.0, 1.0, 0.0);
  CHECK_FALSE(bad.pass);
  const std::string csv = to_csv({bad});
  CHECK(csv.find("e;x,i0,3,q,2,1,1,0,false,0\n") != std::string::npos);

  const ReportRow a = make_bound_row("e", "i0", 0, "alpha", 1.0, 2.0, 1.0, 0.0);
  const ReportRow b = make_bound_row("e", "i1", 1, "alpha", 1.5, 2.5, 1.0, 0.0);
  const ReportRow c = make_residual_row("e", "i0", 0, "beta", 0.0, 1.0);
  const std::string plot = to_plotdata({a, b, c});
  CHECK(plot ==
        "series e:alpha\n0 1 2\n1 1.5 2.5\nseries e:beta\n0 0 1\n");
}

TEST_CASE("operator json round trip") {
  Rng gen = make_rng(33);
  const AlgebraPtr algebra = make_algebra({{2, 0.5}, {3, 1.5}});
  std::vector<Matrix> blocks = {ginibre(2, 2, gen), ginibre(3, 3, gen)};
  const Operator x(algebra, blocks);
  const Operator back = operator_from_json(operator_to_json(x));
  CHECK(back.algebra().block_count() == 2);
  CHECK(back.algebra().dim(1) == 3);
  CHECK(back.algebra().mass(0) == doctest::Approx(0.5));
  CHECK((back - Operator(make_algebra({{2, 0.5}, {3, 1.5}}), blocks)).sup_norm() == 0.0);

  CHECK_THROWS_AS(operator_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(
      operator_from_json("{\"blocks\":[{\"dim\":2,\"mass\":1,\"entries\":[[1,0]]}]}"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      operator_from_json(
          "{\"blocks\":[{\"dim\":1,\"mass\":1,\"entries\":[[1,0,0]]}]}"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      operator_from_json("{\"blocks\":[{\"dim\":1,\"mass\":0,\"entries\":[[1,0]]}]}"),
      std::invalid_argument);
}

TEST_CASE("suite runs are deterministic and validated") {
  const Config cfg = Config::parse_text("instances = 3\ndims = 4\n");
  const std::vector<ReportRow> rows = run_suite("burkholder", cfg);
  CHECK(rows.size() == 9);
  CHECK(all_pass(rows));
  CHECK(to_csv(rows) == to_csv(run_suite("burkholder", cfg)));

  CHECK_THROWS_AS(run_suite("bogus", cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_suite("burkholder", Config::parse_text("whatever = 1\n")),
                  std::invalid_argument);

  Config dispatch = cfg;
  dispatch.set("suite", "burkholder");
  CHECK(run_experiment(dispatch).size() == 9);
}

TEST_CASE("small verification batches pass end to end") {
  const Config vcfg = Config::parse_text("seeds = 0..2\nmodel.N = 96\n");
  const std::vector<ReportRow> vrows = run_suite("voiculescu", vcfg);
  CHECK(vrows.size() == 7);  // two rows per seed plus the window aggregate
  CHECK(all_pass(vrows));

  const Config lcfg = Config::parse_text(
      "d = 1\ninstances = 1\nspaces = lp:1,lp:inf\nmodel.N = 64\nmodel.trials = 2\n");
  CHECK(all_pass(run_suite("lengthd", lcfg)));

  const Config jcfg = Config::parse_text(
      "K = 2\nseeds = 0,1\nspaces = lp:inf\nmodel.N = 64\nmodel.trials = 2\n");
  const std::vector<ReportRow> jrows = run_suite("js", jcfg);
  CHECK(all_pass(jrows));
}

TEST_CASE("instance failures become failed rows") {
  // The compression guard trips at this depth; the batch must not abort.
  const Config cfg = Config::parse_text("L = 10\ninstances = 0\n");
  const std::vector<ReportRow> rows = run_suite("buchholz", cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].pass);
  CHECK(rows[0].quantity.rfind("error:", 0) == 0);
}

TEST_CASE("text files round trip") {
  const std::string path = "harness_roundtrip.tmp";
  write_text_file(path, "alpha\nbeta\n");
  CHECK(read_text_file(path) == "alpha\nbeta\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("does_not_exist.tmp"), std::runtime_error);
}
