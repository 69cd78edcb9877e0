#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gfl/cli.hpp"
#include "gfl/error.hpp"
#include "gfl/models.hpp"
#include "gfl/text.hpp"

namespace fs = std::filesystem;
using namespace gfl;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run gfl_run(std::vector<std::string> args) {
  args.insert(args.begin(), "gfl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gfl-cli-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const std::string src = GFL_SOURCE_DIR;

}  // namespace

TEST_CASE("validate exits 0 on a consistent table and 1 on violations") {
  const auto dir = scratch("validate");
  const auto ok = gfl_run({"validate", "--model", "table:" + src + "/fixtures/chain3.tbl", "--out", dir.string()});
  CHECK(ok.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(text::read_file((dir / "validate.json").string()));
  CHECK(doc["ok"] == true);
  CHECK(doc["config"]["model"] == "table:" + src + "/fixtures/chain3.tbl");
  CHECK_FALSE(doc["config"].contains("out"));
  CHECK_FALSE(doc["config"].contains("threads"));
  for (const auto& r : doc["reports"]) {
    for (const char* key : {"axiom", "fixtures_checked", "violations", "max_residual"}) CHECK(r.contains(key));
  }
  CHECK(fs::exists(dir / "validate.csv"));

  const auto bad = gfl_run({"validate", "--model", "table:" + src + "/fixtures/corrupt.tbl", "--out", dir.string()});
  CHECK(bad.code == cli::kExitViolations);
  CHECK(bad.out.find("nonnegativity") != std::string::npos);
}

TEST_CASE("diagnose maps verdicts to exit codes 0, 2 and 3") {
  const auto dir = scratch("diagnose");
  CHECK(gfl_run({"diagnose", "--model", "product:p=1/3", "--out", dir.string()}).code == cli::kExitOk);
  const auto div = gfl_run({"diagnose", "--model", "example2:tau=1,window=163", "--family", "oscillating", "--out",
                            dir.string()});
  CHECK(div.code == cli::kExitDivergence);
  const auto doc = nlohmann::json::parse(text::read_file((dir / "diagnose.json").string()));
  CHECK(doc["verdict"] == "divergence-witness");
  CHECK(doc["filtration"] == "[3,7,19,55,163]");
  CHECK(doc["witness"]["persistent_gap"].get<double>() >= 0.4);
  CHECK(doc["witness_search"]["found"] == true);
  CHECK(gfl_run({"diagnose", "--model", "product:p=1/2,window=5", "--out", dir.string()}).code ==
        cli::kExitInconclusive);
}

TEST_CASE("diagnose reports are byte-identical across thread caps") {
  const auto a = scratch("threads-a");
  const auto b = scratch("threads-b");
  const std::vector<std::string> common{"diagnose", "--model", "example2:tau=2,window=40", "--family",
                                        "standard:3+oscillating"};
  auto with = [&](const fs::path& dir, const std::string& threads) {
    auto args = common;
    args.insert(args.end(), {"--out", dir.string(), "--threads", threads});
    return gfl_run(args).code;
  };
  CHECK(with(a, "1") == with(b, "4"));
  CHECK(text::read_file((a / "diagnose.json").string()) == text::read_file((b / "diagnose.json").string()));
  CHECK(text::read_file((a / "diagnose.csv").string()) == text::read_file((b / "diagnose.csv").string()));
}

TEST_CASE("reproduce --check passes on the goldens and fails with a diff on a tampered copy") {
  const std::string goldens = src + "/goldens";
  CHECK(gfl_run({"reproduce", "example1", "--check", "--goldens", goldens}).code == cli::kExitOk);
  CHECK(gfl_run({"reproduce", "example2", "--check", "--goldens", goldens}).code == cli::kExitOk);

  const auto dir = scratch("tampered");
  fs::copy(goldens, dir, fs::copy_options::recursive);
  const auto target = dir / "example2" / "example2_hamiltonian.csv";
  std::string body = text::read_file(target.string());
  body.replace(body.find("inf"), 3, "42");
  std::ofstream(target, std::ios::binary) << body;
  const auto r = gfl_run({"reproduce", "example2", "--check", "--goldens", dir.string()});
  CHECK(r.code == cli::kExitViolations);
  CHECK(r.out.find("MISMATCH") != std::string::npos);
  CHECK(r.out.find("+ 0,1,inf") != std::string::npos);
  CHECK(gfl_run({"reproduce", "example3"}).code == cli::kExitError);
}

TEST_CASE("energy dumps exact ratios in rational mode and 17 digits in float mode") {
  const auto dir = scratch("energy");
  const std::string model = "table:" + src + "/fixtures/chain3.tbl";
  CHECK(gfl_run({"energy", "--model", model, "--volume", "(1)", "--condition", "(0)=+1;(2)=-1", "--out",
                 dir.string()})
            .code == cli::kExitOk);
  const auto delta = text::read_file((dir / "energy_delta.tbl").string());
  CHECK(delta.find("(1)=-1|(1)=+1\t5/7") != std::string::npos);
  CHECK(gfl_run({"energy", "--mode", "float", "--model", model, "--volume", "(1)", "--condition", "(0)=+1;(2)=-1",
                 "--out", dir.string()})
            .code == cli::kExitOk);
  const auto h = text::read_file((dir / "energy_hamiltonian.tbl").string());
  const auto at = h.find("(1)=+1\t");
  REQUIRE(at != std::string::npos);
  const std::string value = h.substr(at + 7, h.find('\n', at) - at - 7);
  CHECK(value.size() == 20);
  CHECK(std::stod(value) == doctest::Approx(-std::log(1.4)).epsilon(1e-14));
  const auto doc = nlohmann::json::parse(text::read_file((dir / "energy.json").string()));
  CHECK(doc["cocycle"] == true);
}

TEST_CASE("reconstruct agrees with the direct conditional") {
  const auto dir = scratch("reconstruct");
  const auto r = gfl_run({"reconstruct", src + "/fixtures/chain3.tbl", "--volume", "(0),(2)", "--condition",
                          "(1)=+1", "--reference", "(0)=+1;(2)=-1", "--order", "(2),(0)", "--out", dir.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("(0)=+1;(2)=-1\t7/22") != std::string::npos);
}

TEST_CASE("config files are overlaid by explicit flags") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# experiment\nmodel = product:p=1/3\nfamily = constants\nout = " << dir.string() << "\n";
  CHECK(gfl_run({"diagnose", "--config", cfg.string()}).code == cli::kExitOk);
  auto doc = nlohmann::json::parse(text::read_file((dir / "diagnose.json").string()));
  CHECK(doc["config"]["family"] == "constants");
  CHECK(doc["family_size"] == 2);
  CHECK(gfl_run({"diagnose", "--config", cfg.string(), "--family", "standard:1"}).code == cli::kExitOk);
  doc = nlohmann::json::parse(text::read_file((dir / "diagnose.json").string()));
  CHECK(doc["family_size"] == 3);

  std::ofstream(dir / "bad.cfg") << "colour = blue\n";
  const auto bad = gfl_run({"diagnose", "--config", (dir / "bad.cfg").string()});
  CHECK(bad.code == cli::kExitError);
  CHECK(bad.err.find("unknown config key") != std::string::npos);
}

TEST_CASE("the enumeration cap can be lowered from the environment") {
  const auto dir = scratch("cap");
  const auto saved = enumeration_cap();
  setenv("GFL_ENUM_CAP", "64", 1);
  const auto r = gfl_run({"validate", "--model", "ising:beta=0.4,window=9", "--out", dir.string()});
  unsetenv("GFL_ENUM_CAP");
  set_enumeration_cap(saved);
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("filtration and family specifications") {
  const Volume w = window_box(1, 11);
  CHECK(cli::parse_filtration("linear", w, Site{5}).str() == "[3,5,7,9,11]");
  CHECK(cli::parse_filtration("box:0,2,5", w, Site{5}).str() == "[1,5,11]");
  CHECK(cli::parse_filtration("lopsided", w, Site{5}).str() == "[4,7,9,10,11]");
  CHECK(cli::parse_filtration("stages:(5),(6)|(4),(5),(6)", w, Site{5}).size() == 2);
  CHECK(cli::parse_filtration("geometric", window_box(1, 163), Site{81}).str() == "[3,7,19,55,163]");
  CHECK_THROWS_AS(cli::parse_filtration("spiral", w, Site{5}), ParseError);
  CHECK_THROWS_AS(cli::parse_filtration("linear", w, Site{50}), ArgumentError);

  const Alphabet bin = Alphabet::binary();
  CHECK(cli::parse_family("standard:2+oscillating", bin, 1).size() == 8);
  CHECK(cli::parse_family("density:1/3+oscillating:0,1+explicit:(0)=1", bin, 1).size() == 3);
  CHECK_THROWS_AS(cli::parse_family("weird", bin, 1), ParseError);
  CHECK(cli::default_site(w) == Site{5});
}

TEST_CASE("usage errors") {
  CHECK(gfl_run({}).code != cli::kExitOk);
  CHECK(gfl_run({"validate", "--model", "nonsense:x=1"}).code == cli::kExitError);
  CHECK(gfl_run({"--help"}).code == 0);
}
