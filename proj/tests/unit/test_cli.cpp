#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "fuzzy_spectra/cli.hpp"

using namespace fuzzy;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fuzzy-spectra");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}
}  // namespace

TEST_CASE("spectrum command reproduces the lambda = 2 closed form") {
  const Result r = invoke({"spectrum", "--space", "circle", "--lambda", "2", "--k", "36"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "h,eigenvalue\n1,0.87400737347512969\n2,0.51370116691408407\n3,0\n4,-0.51370116691408407\n"
        "5,-0.87400737347512969\n");
}

TEST_CASE("spectrum JSON and sphere blocks") {
  const Result r = invoke({"spectrum", "--space", "sphere", "--lambda", "3", "--m", "1", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["eigenvalues"].size() == 3);
  const Result all = invoke({"spectrum", "--space", "sphere", "--lambda", "3", "--format", "json"});
  CHECK(nlohmann::json::parse(all.out)["eigenvalues"].size() == 16);
  const Result m = invoke({"spectrum", "--space", "madore", "--lambda", "1"});
  CHECK(m.out == "h,eigenvalue\n1,0.70710678118654746\n2,0\n3,-0.70710678118654746\n");
}

TEST_CASE("verify exit codes") {
  CHECK(invoke({"verify", "--theorem", "parity", "--space", "sphere", "--lambda", "5", "--m", "0"}).code == 0);
  CHECK(invoke({"verify", "--theorem", "monotonicity-circle", "--lambda-max", "30"}).code == 0);
  // the stated perturbation bound fails from lambda = 9 at the minimal k
  CHECK(invoke({"verify", "--theorem", "perturbation-circle", "--lambda-max", "12"}).code == 1);
  CHECK(invoke({"verify", "--theorem", "perturbation-circle", "--lambda-max", "8"}).code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"spectrum", "--space", "circle", "--lambda", "2", "--m", "1"}).code == 2);
  CHECK(invoke({"spectrum", "--lambda", "0"}).code == 2);
  CHECK(invoke({"spectrum", "--lambda", "3", "--k", "10"}).code == 2);
  CHECK(invoke({"spectrum", "--lambda", "3", "--tol", "0"}).code == 2);
  CHECK(invoke({"spectrum", "--lambda-min", "3", "--lambda-max", "4"}).code == 2);
  CHECK(invoke({"spectrum", "--lambda", "3", "--lambda-max", "4"}).code == 2);
  CHECK(invoke({"sweep", "--lambda-min", "5", "--lambda-max", "4"}).code == 2);
  CHECK(invoke({"verify", "--lambda", "3"}).code == 2);
  CHECK(invoke({"verify", "--theorem", "nonsense"}).code == 2);
  CHECK(invoke({"spectrum", "--space", "torus", "--lambda", "2"}).code == 2);
  CHECK(invoke({"spectrum", "--space", "madore", "--lambda", "2", "--k", "36"}).code == 2);
  CHECK(invoke({"spectrum", "--lambda", "2", "--k", "40", "--k-rule", "lambda6"}).code == 2);
  const Result r = invoke({"spectrum", "--space", "circle", "--lambda", "2", "--m", "1"});
  CHECK(r.out.empty());
  CHECK(r.err.find("--m") != std::string::npos);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("madore-compare JSON fields") {
  const Result r = invoke({"madore-compare", "--lambda", "10"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["L3_fuzzy"].get<double>() == 0.0);
  CHECK(j["L3_madore"].get<double>() == 10.0);
  CHECK(j["top_eig_madore"].get<double>() == doctest::Approx(std::sqrt(10.0 / 11.0)));
  CHECK(j["top_eig_fuzzy"].get<double>() > j["top_eig_madore"].get<double>());
}

TEST_CASE("eigvec, localize, algebra-check and sweep") {
  const Result e = invoke({"eigvec", "--lambda", "1", "--index", "1", "--format", "json"});
  REQUIRE(e.code == 0);
  const auto j = nlohmann::json::parse(e.out);
  CHECK(j["components"][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["components"][1].get<double>() == doctest::Approx(std::sqrt(0.5)));
  CHECK(invoke({"eigvec", "--lambda", "1", "--index", "4"}).code == 2);

  const Result loc = invoke({"localize", "--space", "sphere", "--lambda-min", "2", "--lambda-max", "4"});
  CHECK(loc.code == 0);
  CHECK(loc.out.rfind("lambda,top_eigenvalue,dispersion,L_expectation\n2,", 0) == 0);

  CHECK(invoke({"algebra-check", "--space", "circle", "--lambda", "5"}).code == 0);
  CHECK(invoke({"algebra-check", "--space", "sphere", "--lambda", "3"}).code == 0);
  CHECK(invoke({"algebra-check", "--space", "madore", "--lambda", "3"}).code == 2);

  const Result sw = invoke({"sweep", "--space", "circle", "--lambda-max", "20"});
  CHECK(sw.code == 0);
  CHECK(sw.out.find("\nlambda,alpha1,lower_bound,upper_bound,pass\n1,0.70710678118654") != std::string::npos);
  const Result ss = invoke({"sweep", "--space", "sphere", "--lambda-max", "20", "--format", "json"});
  CHECK(ss.code == 0);
  CHECK(nlohmann::json::parse(ss.out)["reports"][0]["notes"]["lambda0"] == "1");
}

TEST_CASE("output is byte-deterministic and written to --output") {
  const std::vector<std::string> args = {"verify", "--theorem", "algebra-sphere", "--lambda-max", "4", "--format", "json"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const auto path = std::filesystem::temp_directory_path() / "fuzzy_spectra_cli_out.json";
  std::vector<std::string> with_file = args;
  with_file.push_back("--output");
  with_file.push_back(path.string());
  const Result c = invoke(with_file);
  CHECK(c.code == 0);
  CHECK(c.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == a.out);
  std::filesystem::remove(path);
}
