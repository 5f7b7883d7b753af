#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "lattice/cbc.hpp"
#include "lattice/criterion.hpp"
#include "lattice/io.hpp"

using namespace lattice;

namespace {

std::string cli_binary() {
  const char* path = std::getenv("LATTICE_CLI");
  REQUIRE_MESSAGE(path != nullptr, "LATTICE_CLI must point at the command line binary");
  return path;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
  const std::string out = temp_path("lattice_cli_capture.txt");
  const std::string cmd = "'" + cli_binary() + "' " + args + " >'" + out + "' 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = read_text_file(out);
  std::remove(out.c_str());
  return r;
}

// Value of a top-level "key":<number> field in a flat JSON object.
double json_number(const std::string& text, const std::string& key) {
  const std::string tag = "\"" + key + "\":";
  const std::size_t at = text.find(tag);
  REQUIRE_MESSAGE(at != std::string::npos, "missing key " << key << " in " << text);
  return std::strtod(text.c_str() + at + tag.size(), nullptr);
}

const std::string kOnes2 = R"('{"kind":"product","d":2,"gammas":[1,1]}')";

}  // namespace

TEST_CASE("construct writes a reproducible vector file") {
  const std::string out1 = temp_path("lattice_cli_vec1.txt");
  const std::string out2 = temp_path("lattice_cli_vec2.txt");
  const RunResult r1 =
      run("construct --n 13 --alpha 2 --weights " + kOnes2 + " --out '" + out1 + "'");
  const RunResult r2 =
      run("construct --n 13 --alpha 2 --weights " + kOnes2 + " --out '" + out2 + "'");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r1.output == r2.output);
  CHECK(read_text_file(out1) == read_text_file(out2));
  CHECK(r1.output.rfind("criterion=", 0) == 0);

  // The file holds exactly the library's construction with its metadata.
  const SpaceParams params = make_space_params(2.0, 2, WeightModel::product({1.0, 1.0}));
  const CriterionContext ctx(params, 13);
  const CbcResult res = cbc_construct(ctx);
  VectorFileMetadata meta;
  const GeneratingVector gv = read_vector_file(out1, &meta);
  CHECK(gv.z == res.rule.z);
  REQUIRE(meta.alpha.has_value());
  CHECK(*meta.alpha == 2.0);
  REQUIRE(meta.weight_hash.has_value());
  CHECK(*meta.weight_hash == weight_model_hash(params.weights));
  REQUIRE(meta.criterion.has_value());
  CHECK(*meta.criterion == S_d(ctx, res.rule));

  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("criterion reports the library value digit for digit") {
  const std::string vec = temp_path("lattice_cli_vec3.txt");
  REQUIRE(run("construct --n 13 --alpha 2 --weights " + kOnes2 + " --out '" + vec + "'")
              .exit_code == 0);
  const RunResult r = run("criterion --vector '" + vec + "' --alpha 2 --weights " + kOnes2);
  CHECK(r.exit_code == 0);

  const SpaceParams params = make_space_params(2.0, 2, WeightModel::product({1.0, 1.0}));
  const CriterionContext ctx(params, 13);
  const GeneratingVector gv = read_vector_file(vec);
  CHECK(json_number(r.output, "S_d") == S_d(ctx, gv));
  CHECK(json_number(r.output, "n") == 13.0);
  CHECK(json_number(r.output, "e_int") ==
        worst_case_integration_error(ctx, gv));
  std::remove(vec.c_str());
}

TEST_CASE("criterion oracle block carries a valid tail bound") {
  const std::string vec = temp_path("lattice_cli_vec4.txt");
  REQUIRE(run("construct --n 7 --alpha 2 --weights " + kOnes2 + " --out '" + vec + "'")
              .exit_code == 0);
  const RunResult r =
      run("criterion --vector '" + vec + "' --alpha 2 --weights " + kOnes2 + " --oracle 200");
  CHECK(r.exit_code == 0);
  const double diff = json_number(r.output, "abs_diff");
  const double tail = json_number(r.output, "tail_bound");
  CHECK(diff <= tail + 1e-8);
  std::remove(vec.c_str());
}

TEST_CASE("indexset lists the classic seven indices") {
  const RunResult r =
      run(R"(indexset --M 10 --alpha 2 --weights '{"kind":"product","d":1,"gammas":[1]}')");
  CHECK(r.exit_code == 0);
  int data_lines = 0;
  std::string line;
  std::istringstream in(r.output);
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++data_lines;
  CHECK(data_lines == 7);
}

TEST_CASE("exit codes distinguish failure classes") {
  // Non-prime rule size: rejected by validation.
  CHECK(run("construct --n 12 --alpha 2 --weights " + kOnes2 + " --out /tmp/never.txt")
            .exit_code == 2);
  // Unreadable input file.
  CHECK(run("criterion --vector /tmp/lattice_no_such_file.txt --alpha 2 --weights " + kOnes2)
            .exit_code == 4);
  // Malformed weight configuration.
  CHECK(run("indexset --M 10 --alpha 2 --weights '{\"kind\":\"prod\"}'").exit_code == 3);
  // Enumeration budget exhausted.
  CHECK(run("indexset --M 1e6 --alpha 2 --weights " + kOnes2 + " --budget 10").exit_code == 5);
  // Unknown flag is a usage error.
  CHECK(run("construct --frobnicate 1").exit_code == 3);
  // Help exits cleanly.
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("approx reports an error within its own bound") {
  const std::string vec = temp_path("lattice_cli_vec5.txt");
  REQUIRE(run("construct --n 31 --alpha 2 --weights " + kOnes2 + " --out '" + vec + "'")
              .exit_code == 0);
  const std::string coeffs = temp_path("lattice_cli_coeffs.csv");
  const RunResult r = run(
      "approx --function '{\"kind\":\"random_polynomial\",\"seed\":5,\"parameters\":{\"M\":9}}' "
      "--vector '" +
      vec + "' --M 9 --alpha 2 --weights " + kOnes2 + " --coefficients '" + coeffs + "'");
  CHECK(r.exit_code == 0);
  CHECK(json_number(r.output, "l2_error") <= json_number(r.output, "bound") + 1e-12);

  // The coefficient dump has a header plus one row per index of A(9).
  const std::string csv = read_text_file(coeffs);
  CHECK(csv.rfind("h1,h2,re,im\n", 0) == 0);
  std::remove(vec.c_str());
  std::remove(coeffs.c_str());
}

TEST_CASE("sweep emits the convergence table header") {
  const RunResult r = run("sweep --n-list 11,13 --alpha 2 --weights " + kOnes2);
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("n,S_d,bound,simplified\n", 0) == 0);
  // One data row per rule size.
  CHECK(r.output.find("\n11,") != std::string::npos);
  CHECK(r.output.find("\n13,") != std::string::npos);
}
