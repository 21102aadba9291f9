// Drives the installed command line binary end to end. The test runner passes
// the binary's location through the BELDI_CLI environment variable.
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "json.hpp"

#include "beldi/netio.hpp"
#include "fixtures.hpp"

namespace {

std::string cli() {
  const char* p = std::getenv("BELDI_CLI");
  REQUIRE_MESSAGE(p != nullptr, "BELDI_CLI must point at the command line binary");
  return p;
}

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = cli() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int st = pclose(pipe);
  if (WIFEXITED(st)) r.status = WEXITSTATUS(st);
  return r;
}

std::string temp_path(const std::string& name) {
  return "/tmp/beldi_cli_" + std::to_string(getpid()) + "_" + name;
}

std::string write_file(const std::string& name, const std::string& text) {
  std::string path = temp_path(name);
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("query computes the rain posterior") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("query " + f + " -e 'Grass=wet'");
  CHECK(r.status == 0);
  CHECK(r.out == "Rain\tyes\t0.529412\nRain\tno\t0.470588\n");
}

TEST_CASE("validate summarizes a healthy file") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("validate " + f);
  CHECK(r.status == 0);
  CHECK(r.out == "ok: 2 nodes, 1 arcs, 0 pending assertions, topology=forest\n");
}

TEST_CASE("validate reports parse diagnostics with positions") {
  std::string f = write_file("dup.net", "node Rain : yes yes\n");
  CliResult r = run_cli("validate " + f, true);
  CHECK(r.status == 1);
  CHECK(contains(r.out, ":1:1:"));
}

TEST_CASE("export reaches a fixpoint after one cycle") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult first = run_cli("export " + f);
  CHECK(first.status == 0);
  std::string f2 = write_file("rain_canonical.net", first.out);
  CliResult second = run_cli("export " + f2);
  CHECK(second.status == 0);
  CHECK(second.out == first.out);
}

TEST_CASE("export --dot draws the diagram") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("export " + f + " --dot");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "digraph beliefs {"));
  CHECK(contains(r.out, "\"Rain\" -> \"Grass\";"));
}

TEST_CASE("generate, validate, query round trip") {
  CliResult gen = run_cli("generate --seed 3 --topology polytree --nodes 7 --evidence-count 2");
  CHECK(gen.status == 0);
  std::string f = write_file("generated.net", gen.out);

  CliResult val = run_cli("validate " + f);
  CHECK(val.status == 0);
  CHECK(contains(val.out, "7 nodes"));
  CHECK(contains(val.out, "2 pending assertions"));

  CliResult q = run_cli("query " + f + " --allow-fallback --oracle");
  CHECK(q.status == 0);
  CHECK(contains(q.out, "# max-abs-difference"));
}

TEST_CASE("generate rejects impossible requests") {
  CliResult r = run_cli("generate --nodes 0");
  CHECK(r.status == 2);
}

TEST_CASE("oracle cross-check annotates the output") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("query " + f + " -e 'Grass=wet' --oracle");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "Rain\tyes\t0.529412\n"));
  CHECK(contains(r.out, "# oracle\tRain\tyes\t0.529412\n"));
  CHECK(contains(r.out, "# max-abs-difference\t"));
}

TEST_CASE("trace prints the structural steps") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("trace " + f + " -e 'Grass=wet'");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "ABSORB node=Grass outcome=wet\n"
        "REVERSE i=Rain j=Grass\n"
        "SUMMARY reversals=1 fillins=0 topology=forest\n");
}

TEST_CASE("trace shows fill-ins on the two-path diagram") {
  std::string f = write_file("twopath.net", beldi::write_network(fixtures::twopath6()));
  CliResult r = run_cli("trace " + f + " -e '6=a' --allow-fallback");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "ABSORB node=6 outcome=a\n"
        "REVERSE i=5 j=6\n"
        "REVERSE i=4 j=6\n"
        "ARC+ 3->4\n"
        "REVERSE i=3 j=6\n"
        "ARC+ 2->3\n"
        "REVERSE i=2 j=6\n"
        "ARC+ 1->2\n"
        "REVERSE i=1 j=6\n"
        "SUMMARY reversals=5 fillins=3 topology=multiply-connected\n");

  // without the fallback the multiply connected posterior is a hard failure
  CliResult strict = run_cli("query " + f + " -e '6=a'");
  CHECK(strict.status == 1);
}

TEST_CASE("an explicit ordering changes the fill-ins, not the answer") {
  std::string f = write_file("twopath.net", beldi::write_network(fixtures::twopath6()));
  CliResult traced =
      run_cli("trace " + f + " -e '6=a' --order '2,4,1,3,5' --allow-fallback");
  CHECK(traced.status == 0);
  CHECK(traced.out ==
        "ABSORB node=6 outcome=a\n"
        "REVERSE i=5 j=6\n"
        "REVERSE i=3 j=6\n"
        "ARC+ 4->3\n"
        "REVERSE i=1 j=6\n"
        "ARC+ 4->1\n"
        "REVERSE i=4 j=6\n"
        "REVERSE i=2 j=6\n"
        "SUMMARY reversals=5 fillins=2 topology=multiply-connected\n");

  CliResult def = run_cli("query " + f + " -e '6=a' --allow-fallback");
  CliResult ord = run_cli("query " + f + " -e '6=a' --order '2,4,1,3,5' --allow-fallback");
  CHECK(def.status == 0);
  CHECK(ord.status == 0);
  CHECK(def.out == ord.out);
}

TEST_CASE("strategies agree byte for byte") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult batch = run_cli("query " + f + " -e 'Grass=wet' --strategy batch");
  CliResult message = run_cli("query " + f + " -e 'Grass=wet' --strategy message");
  CliResult priority = run_cli("query " + f + " -e 'Grass=wet' --strategy priority");
  CHECK(batch.status == 0);
  CHECK(batch.out == message.out);
  CHECK(batch.out == priority.out);
}

TEST_CASE("json output carries the run metadata") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("query " + f + " -e 'Grass=wet' --format json");
  CHECK(r.status == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["topology"] == "forest");
  CHECK(j["method"] == "propagation");
  CHECK(j["reversals"] == 1);
  CHECK(j["fillins"] == 0);
  CHECK(j["marginals"]["Rain"]["yes"].get<double>() == doctest::Approx(0.18 / 0.34));
}

TEST_CASE("evidence files and embedded evidence blocks are honored") {
  std::string ef = write_file("rain.ev", "# observed this morning\nRain = yes\n");
  std::string f = write_file("rain.net", fixtures::rain_text());
  CliResult r = run_cli("query " + f + " --evidence-file " + ef);
  CHECK(r.status == 0);
  CHECK(r.out == "Grass\twet\t0.900000\nGrass\tdry\t0.100000\n");

  std::string with_block =
      write_file("rain_block.net",
                 std::string(fixtures::rain_text()) + "evidence { Grass = wet ; }\n");
  CliResult val = run_cli("validate " + with_block);
  CHECK(val.status == 0);
  CHECK(val.out == "ok: 2 nodes, 1 arcs, 1 pending assertions, topology=forest\n");
  CliResult q = run_cli("query " + with_block);
  CHECK(q.status == 0);
  CHECK(q.out == "Rain\tyes\t0.529412\nRain\tno\t0.470588\n");
}

TEST_CASE("usage errors exit with code 2") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CHECK(run_cli("validate /nonexistent/path.net").status == 2);
  CHECK(run_cli("query " + f + " -e 'Grass=wet' --strategy message --order Rain").status == 2);
  CHECK(run_cli("query " + f + " --order Rain").status == 2);
  CHECK(run_cli("query " + f + " --strategy bogus").status == 2);
  CHECK(run_cli("").status == 2);
}

TEST_CASE("domain errors exit with code 1") {
  std::string f = write_file("rain.net", fixtures::rain_text());
  CHECK(run_cli("query " + f + " -e 'Grass=soggy'").status == 1);
  CHECK(run_cli("query " + f + " -e 'Nope=wet'").status == 1);
}
