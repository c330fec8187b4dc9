#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sppfix/sppfix.hpp"

using namespace sppfix;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data_path(const std::string& name) { return std::string(SPPFIX_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

}  // namespace

TEST_CASE("solve on the three-page example", "[cli]") {
  auto r = run({"solve", data_path("back_button.spp"), "--max-iters", "14"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("iterations: 14") != std::string::npos);
  CHECK(r.out.find("X1 = 0.98") != std::string::npos);

  // byte-identical output across runs
  auto again = run({"solve", data_path("back_button.spp"), "--max-iters", "14"});
  CHECK(again.out == r.out);
}

TEST_CASE("solve json output", "[cli]") {
  auto r = run({"solve", data_path("back_button.spp"), "--max-iters", "10", "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["method"] == "newton");
  CHECK(j["scalar"] == "float:256");
  CHECK(j["iterations"] == 10);
  auto x1 = j["solution"]["X1"].get<std::string>();
  CHECK(x1.substr(0, 6) == "0.9828");
}

TEST_CASE("solve in rational mode prints fractions", "[cli]") {
  auto r = run({"solve", data_path("half_square.spp"), "--scalar", "rational", "--max-iters",
                "10"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("X = 1023/1024") != std::string::npos);
}

TEST_CASE("solve rejects systems that clean to nothing", "[cli]") {
  auto path = temp_file("identity.spp", "X = X\n");
  auto r = run({"solve", path});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("empty after cleaning") != std::string::npos);
}

TEST_CASE("solve reports divergence", "[cli]") {
  auto path = temp_file("divergent.spp", "X = X^2 + 1\n");
  auto r = run({"solve", path});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("DivergenceSuspected") != std::string::npos);
}

TEST_CASE("removed variables are reported at zero", "[cli]") {
  auto path = temp_file("partial.spp", "X1 = X1*X2 + 0.5\nX2 = X2^2\n");
  auto r = run({"solve", path, "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["solution"]["X2"] == "0");
  CHECK(j["removed"][0] == "X2");
  CHECK(j["solution"]["X1"] == "0.5");
}

TEST_CASE("alternative methods run", "[cli]") {
  auto kleene = run({"solve", data_path("back_button.spp"), "--method", "kleene", "--max-iters",
                     "14"});
  CHECK(kleene.exit_code == 0);
  CHECK(kleene.out.find("X1 = 0.88") != std::string::npos);

  auto family = temp_file("family3.spp", print_system(worst_case_family(3)));
  auto dnm = run({"solve", family, "--method", "dnm", "--max-iters", "1"});
  CHECK(dnm.exit_code == 0);
  CHECK(dnm.out.find("iterations: 7") != std::string::npos);

  auto tangent = run({"solve", data_path("geo_ex1.spp"), "--method", "tangent", "--max-iters",
                      "12"});
  CHECK(tangent.exit_code == 0);
  CHECK(tangent.out.find("X = 0.359") != std::string::npos);
}

TEST_CASE("certify reaches the worked-example target", "[cli]") {
  auto r = run({"certify", data_path("back_button.spp"), "--target-bits", "13", "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["global"]["certified"] == true);
  CHECK(j["global"]["bits"].get<long>() >= 13);
  REQUIRE(j["sccs"].size() == 1);
  CHECK(j["sccs"][0]["iterations"].get<long>() <= 10);
  CHECK(j["sccs"][0]["certificate"]["justification"] == "Proximity2");
  for (const auto& u : j["global"]["upper"])
    CHECK(u.get<std::string>().substr(0, 2) == "0.");

  auto again = run({"certify", data_path("back_button.spp"), "--target-bits", "13", "--json"});
  CHECK(again.out == r.out);
}

TEST_CASE("certify flags multi-component compositions", "[cli]") {
  auto family = temp_file("family3b.spp", print_system(worst_case_family(3)));
  auto r = run({"certify", family, "--target-bits", "4", "--max-iters", "40", "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["global"]["certified"] == false);
  CHECK(j["sccs"].size() == 3);
  CHECK(j["global"].contains("note"));
}

TEST_CASE("certify exit code 2 when the budget is too small", "[cli]") {
  auto r = run({"certify", data_path("back_button.spp"), "--target-bits", "1000000",
                "--max-iters", "5"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("certify a one-dimensional system to one bit", "[cli]") {
  auto r = run({"certify", data_path("half_square.spp"), "--target-bits", "1", "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["global"]["bits"].get<long>() >= 1);
}

TEST_CASE("decompose prints depths", "[cli]") {
  auto family = temp_file("family3c.spp", print_system(worst_case_family(3)));
  auto r = run({"decompose", family, "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  REQUIRE(j["sccs"].size() == 3);
  CHECK(j["sccs"][0]["members"][0] == "X1");
  CHECK(j["sccs"][0]["depth"] == 2);
  CHECK(j["sccs"][1]["depth"] == 1);
  CHECK(j["sccs"][2]["depth"] == 0);
  CHECK(j["height"] == 2);
  CHECK(j["width"] == 1);
}

TEST_CASE("convert models to equation text", "[cli]") {
  auto r = run({"convert", data_path("back_button_model.json")});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out ==
        "X1 = 0.4*X1*X2 + 0.6\n"
        "X2 = 0.3*X1*X2 + 0.4*X2*X3 + 0.3\n"
        "X3 = 0.3*X1*X3 + 0.7\n");

  auto p = run({"convert", data_path("ppda_half.json")});
  REQUIRE(p.exit_code == 0);
  CHECK(p.out.find("p_X_p = 0.5*p_X_p^2 + 0.5") != std::string::npos);
  CHECK(p.out.find("# p_X_p = [p X p]") != std::string::npos);
}

TEST_CASE("model json solves directly", "[cli]") {
  auto r = run({"solve", data_path("back_button_model.json"), "--max-iters", "14"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("X1 = 0.98") != std::string::npos);
}

TEST_CASE("bench reproduces the slow-convergence claim", "[cli]") {
  auto r = run({"bench", "--n", "3", "--k-max", "2", "--json"});
  REQUIRE(r.exit_code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["scalar"] == "rational");
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][1]["k"] == 2);
  CHECK(j["rows"][1]["iterations"] == 8);
  CHECK(j["rows"][1]["error_exceeds_threshold"] == true);
}

TEST_CASE("bad inputs exit with one", "[cli]") {
  auto path = temp_file("bad.spp", "X1 = 0.5*X1^2 + 0.5 - 1\n");
  auto r = run({"solve", path});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("NegativeCoefficient") != std::string::npos);

  auto missing = run({"solve", "/nonexistent/file.spp"});
  CHECK(missing.exit_code == 1);

  auto unknown_flag = run({"solve", data_path("half_square.spp"), "--scalar", "float:32"});
  CHECK(unknown_flag.exit_code == 1);
}

TEST_CASE("help exits zero", "[cli]") {
  auto r = run({"--help"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("solve") != std::string::npos);
}
