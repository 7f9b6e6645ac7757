#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_bin() { return EULERPROD_CLI_BIN; }

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args, const fs::path& workdir) {
  fs::create_directories(workdir);
  fs::path out = workdir / "stdout.txt";
  std::string cmd = "cd " + workdir.string() + " && " + std::string(cli_bin()) + " " +
                    args + " > " + out.string() + " 2>stderr.txt";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out);
  r.output.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return r;
}

fs::path sandbox(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("eulerprod_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("expand emits the factor table with boundary and notes") {
  auto dir = sandbox("expand");
  auto r = run("expand --poly \"1 + T + p*T^2\" --depth 12 --out expand.json", dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "expand.json");
  CHECK(text.find("\"schema\": 1") != std::string::npos);
  CHECK(text.find("\"sigma_a\": \"1/1\"") != std::string::npos);
  CHECK(text.find("\"tail_sup\"") != std::string::npos);
  CHECK(text.find("\"terminated\": false") != std::string::npos);
  CHECK(text.find("e(1,3) = -1") != std::string::npos);
}

TEST_CASE("validation errors exit 2 with a machine-readable code") {
  auto dir = sandbox("badpoly");
  auto r = run("expand --poly \"2 + T\"", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("\"code\": \"validation\"") != std::string::npos);
  auto r2 = run("expand", dir);
  CHECK(r2.exit_code == 2);
  // No partial output files on validation failure.
  auto r3 = run("expand --poly \"2 + T\" --out never.json", dir);
  CHECK(r3.exit_code == 2);
  CHECK(!fs::exists(dir / "never.json"));
}

TEST_CASE("zeros command builds, reuses and verifies the cache") {
  auto dir = sandbox("zeros");
  auto r = run("--cache-dir cache zeros --tmax 60 --out z.json", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "cache" / "zeros.csv"));
  auto text = slurp(dir / "z.json");
  CHECK(text.find("14.134725") != std::string::npos);

  SECTION("verify passes on a fresh cache and is idempotent") {
    auto v = run("--cache-dir cache cache verify", dir);
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("\"ok\": true") != std::string::npos);
  }

  SECTION("a truncated cache is quarantined, exit 3") {
    auto csv = dir / "cache" / "zeros.csv";
    auto text_csv = slurp(csv);
    std::ofstream out(csv, std::ios::trunc);
    out << text_csv.substr(0, text_csv.size() / 2);
    out.close();
    auto v = run("--cache-dir cache cache verify", dir);
    CHECK(v.exit_code == 3);
    CHECK(v.output.find("\"code\": \"certification\"") != std::string::npos);
    CHECK(fs::exists(dir / "cache" / "zeros.csv.corrupt"));
    CHECK(!fs::exists(dir / "cache" / "zeros.csv"));
  }

  SECTION("purge is idempotent") {
    auto p1 = run("--cache-dir cache cache purge", dir);
    CHECK(p1.exit_code == 0);
    CHECK(!fs::exists(dir / "cache" / "zeros.csv"));
    auto p2 = run("--cache-dir cache cache purge", dir);
    CHECK(p2.exit_code == 0);
  }
}

TEST_CASE("gap checks ride on the zeros command") {
  auto dir = sandbox("gaps");
  auto r = run("--cache-dir cache zeros --tmax 40 --check-gaps 20:22 --out g.json", dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "g.json");
  CHECK(text.find("\"gap_checks\"") != std::string::npos);
  CHECK(text.find("\"ok\": true") != std::string::npos);
}

TEST_CASE("coeffs CSV dump round-trips the sieve exactly") {
  auto dir = sandbox("coeffs");
  auto r = run("coeffs --preset polarised-z6 --limit 64 --format csv --out c.csv", dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "c.csv");
  CHECK(text.rfind("n,a_n\n", 0) == 0);
  CHECK(text.find("\n8,135\n") != std::string::npos);
  CHECK(text.find("\n27,1120\n") != std::string::npos);
  auto rj = run("coeffs --preset polarised-z6 --limit 64 --out c.json", dir);
  REQUIRE(rj.exit_code == 0);
  CHECK(slurp(dir / "c.json").find("\"dual_route_ok\": true") != std::string::npos);
}

TEST_CASE("identical argv and cache give byte-identical reports across jobs") {
  auto dir = sandbox("determinism");
  auto warm = run("--cache-dir cache cache warm --tmax 70", dir);
  REQUIRE(warm.exit_code == 0);
  auto a = run("--cache-dir cache --jobs 1 zeros --tmax 60 --out a.json", dir);
  auto b = run("--cache-dir cache --jobs 4 zeros --tmax 60 --out b.json", dir);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  auto e1 = run("--cache-dir cache --jobs 1 expand --poly \"1 + T + p*T^2\" --out e1.json", dir);
  auto e2 = run("--cache-dir cache --jobs 4 expand --poly \"1 + T + p*T^2\" --out e2.json", dir);
  REQUIRE(e1.exit_code == 0);
  REQUIRE(e2.exit_code == 0);
  CHECK(slurp(dir / "e1.json") == slurp(dir / "e2.json"));
}

TEST_CASE("randlab scan against a config file") {
  auto dir = sandbox("randlab");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"factors": {"a": {"type": "affine", "mul": "1", "add": "0"},
                "b": {"type": "affine", "mul": "-1/2", "add": "1/2"},
                "c": {"type": "affine", "mul": "0", "add": "2"}},
    "perturbation": {"type": "discrete", "atoms": [["-1", "1/2"], ["1", "1/2"]]},
    "V": 8})";
  }
  auto r = run("--cache-dir cache randlab --config cfg.json --seeds 1,2 "
               "--box-n 10 --t-from 5 --t-to 8 --format csv --out scan.csv",
               dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "scan.csv");
  CHECK(text.rfind("t,box_hit,points\n", 0) == 0);
  auto rj = run("--cache-dir cache randlab --rl-preset sigma-half --V 8 --seeds 1 "
                "--t-from 5 --t-to 8 --out scan.json",
                dir);
  REQUIRE(rj.exit_code == 0);
  CHECK(slurp(dir / "scan.json").find("\"sigma_h\": \"7/16\"") != std::string::npos);
}

TEST_CASE("residues subcommand reports the pole set") {
  auto dir = sandbox("residues");
  auto r = run("residues --preset polarised-z6 --prime-cutoff 20000 --out r.json", dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "r.json");
  CHECK(text.find("\"s\": \"7/1\"") != std::string::npos);
  CHECK(text.find("\"s\": \"6/1\"") != std::string::npos);
  CHECK(text.find("\"s\": \"5/1\"") != std::string::npos);
}

TEST_CASE("spec files select the same product as the preset") {
  auto dir = sandbox("specfile");
  {
    std::ofstream f(dir / "spec.json");
    f << R"({"poly": "1 + p*T + p^2*T + p^3*T + p^4*T + p^5*T^2",
             "prefactors": [[1,0,1],[1,3,1],[1,5,1],[1,6,1]],
             "variable_scale": 3})";
  }
  auto a = run("coeffs --spec spec.json --limit 64 --out a.json", dir);
  auto b = run("coeffs --preset polarised-z6 --limit 64 --out b.json", dir);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  auto bad = run("coeffs --spec missing.json", dir);
  CHECK(bad.exit_code == 2);
}

TEST_CASE("density subcommand tabulates members and windows") {
  auto dir = sandbox("density");
  auto r = run("density --poly \"1 + T + p*T^2\" --x 10,20 --epsilon 1 --out d.json", dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "d.json");
  CHECK(text.find("\"variant\": \"theorem1\"") != std::string::npos);
  CHECK(text.find("\"verdict\": \"finite-range diagnostic, not a proof\"") !=
        std::string::npos);
  auto bad = run("density --poly \"1 + T + p*T^2\" --variant theorem2 --x 10", dir);
  CHECK(bad.exit_code == 2);  // beta missing
}

TEST_CASE("explicit subcommand emits the comparison CSV") {
  auto dir = sandbox("explicit");
  auto r = run("--cache-dir cache explicit --preset polarised-z6 --xmax 1000 "
               "--zeros 3 --grid 100,1000 --format csv --out e.csv",
               dir);
  REQUIRE(r.exit_code == 0);
  auto text = slurp(dir / "e.csv");
  CHECK(text.rfind("x,A_direct,main,oscillatory,residual\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
