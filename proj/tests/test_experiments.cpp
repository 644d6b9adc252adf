#include "doctest.h"

#include <cstdlib>
#include <fstream>

#include "bge/experiments.hpp"
#include "bge/hull.hpp"
#include "bge/veronese.hpp"

using namespace bge;

TEST_CASE("experiment catalog") {
  auto cat = list_experiments();
  CHECK(cat.size() >= 12);
  for (auto& e : cat) {
    CHECK_FALSE(e.name.empty());
    CHECK_FALSE(e.description.empty());
    CHECK_FALSE(e.claim.empty());  // every entry states the claim it verifies
  }
  CHECK_THROWS_AS(run_experiment("no-such-experiment"), contract_violation);
}

TEST_CASE("reports are reproducible") {
  auto a = run_experiment("veronese-quadratic-pg22-hull");
  auto b = run_experiment("veronese-quadratic-pg22-hull");
  CHECK(a.pass);
  CHECK(a.content_hash == b.content_hash);
  CHECK(a.values == b.values);
  auto j = a.to_json();
  CHECK(j["experiment"] == "veronese-quadratic-pg22-hull");
  CHECK(j.contains("wall_ms"));
}

TEST_CASE("the headline values of the registered experiments") {
  auto w = run_experiment("wedge-a3q2");
  CHECK(w.pass);
  CHECK(w.values["hull_order"] == 64);
  CHECK(w.values["cover_degree"] == 1);
  CHECK(w.values["iso_with_unipotent_D4"] == true);

  auto h = run_experiment("2a5q2-hull");
  CHECK(h.pass);
  CHECK(h.values["hull_order"] == 2048);
  CHECK(h.values["u_order"] == 512);
  CHECK(h.values["cover_degree"] == 4);
}

#ifdef BGE_CLI_PATH
namespace {
int run_cli(const std::string& args) {
  std::string cmd = std::string(BGE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}
}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("run c3q2-dual-polar-hull") == 0);
  CHECK(run_cli("run no-such-experiment") == 2);
  CHECK(run_cli("bogus-subcommand") == 2);
  CHECK(run_cli("shadow --building C3(2) --j 3") == 0);
  CHECK(run_cli("unipotent --building B3(3) --j 3 --emit order,derived-order") == 0);

  // amalgam pipeline: veronese --emit amalgam | hull
  std::string amg = "/tmp/bge_test_quad.amg";
  CHECK(std::system((std::string(BGE_CLI_PATH) + " veronese --kind quadratic --n 3 --q 2 --emit amalgam > " + amg)
                        .c_str()) == 0);
  CHECK(run_cli("hull --amalgam " + amg + " --emit order,table-hash") == 0);

  // an enumeration that cannot complete reports the overflow exit code
  std::ofstream bad("/tmp/bge_test_dihedral.amg");
  bad << "AMG 1\ngens 2\norders 2 2\nrelators 2\n1 1\n2 2\n";
  bad.close();
  CHECK(run_cli("hull --amalgam /tmp/bge_test_dihedral.amg --max-cosets 64") == 3);

  // config file supplies defaults below the command line
  std::ofstream cfg("/tmp/bge_test_cfg.json");
  cfg << "{\"max_cosets\": 64}";
  cfg.close();
  CHECK(run_cli("--config /tmp/bge_test_cfg.json hull --amalgam /tmp/bge_test_dihedral.amg") == 3);
  CHECK(run_cli("--config /tmp/bge_test_cfg.json hull --amalgam /tmp/bge_test_dihedral.amg "
                "--max-cosets 1024") == 3);
}
#endif
