#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "cli_runner.hpp"
#include "csmri/io.hpp"
#include "csmri/masks.hpp"
#include "csmri/transform.hpp"

using namespace csmri;
namespace fs = std::filesystem;

namespace {

const fs::path dir = cli::scratch_dir();

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

fs::path phantom(std::size_t n) {
  const fs::path p = dir / ("phantom" + std::to_string(n) + ".png");
  if (!fs::exists(p)) {
    const auto r = cli::run("phantom --kind shepp_logan --size " + std::to_string(n) + " -o " + q(p));
    REQUIRE(r.code == 0);
  }
  return p;
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("mask: random count and fraction report") {
  const auto out = dir / "m256.png";
  const auto r = cli::run("--seed 7 mask --kind random --size 256 --fraction 0.25 -o " + q(out));
  REQUIRE(r.code == 0);
  CHECK(r.output.find("0.250000") != std::string::npos);
  CHECK(load_mask(out).sample_count() == 16384);
  CHECK(fs::exists(dir / "m256.manifest.json"));
}

TEST_CASE("mask: bad flags exit 2") {
  const auto r = cli::run("mask --kind random --size 64 --fraction 1.5 -o " + q(dir / "bad.png"));
  CHECK(r.code == 2);
  CHECK(r.output.find("outside (0, 1]") != std::string::npos);
  CHECK(cli::run("mask --kind spiral --size 64 --fraction 0.5 -o x.png").code == 2);
  CHECK(cli::run("mask --size 64 --fraction 0.5 -o x.png").code == 2);
  CHECK(cli::run("frobnicate").code == 2);
  CHECK_FALSE(fs::exists(dir / "bad.png"));
}

TEST_CASE("mask: same flags give byte-identical files") {
  const auto a = dir / "det_a.png";
  const auto b = dir / "det_b.png";
  REQUIRE(cli::run("--seed 3 mask --kind cartesian --size 96 --fraction 0.3 -o " + q(a)).code == 0);
  REQUIRE(cli::run("--seed 3 mask --kind cartesian --size 96 --fraction 0.3 -o " + q(b)).code == 0);
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("mask: radial by fraction or by line count") {
  const auto a = dir / "rad.png";
  const auto r = cli::run("mask --kind radial --size 128 --fraction 0.2 -o " + q(a));
  REQUIRE(r.code == 0);
  CHECK(r.output.find("lines") != std::string::npos);
  CHECK(std::abs(achieved_fraction(load_mask(a)) - 0.2) < 0.02);
  REQUIRE(cli::run("mask --kind radial --size 64 --lines 10 -o " + q(a)).code == 0);
  CHECK(load_mask(a) == radial_mask({MaskKind::radial, 64, 64, {}, 10, 0, true}));
}

TEST_CASE("reconstruct: full mask gives >= 60 dB") {
  const auto img = phantom(64);
  const auto mask = dir / "full64.png";
  REQUIRE(cli::run("mask --kind random --size 64 --fraction 1.0 -o " + q(mask)).code == 0);
  const auto out = dir / "recon_full.png";
  const auto r = cli::run("reconstruct --image " + q(img) + " --mask " + q(mask) +
                          " --tol 1e-10 --max-iters 100 -o " + q(out));
  REQUIRE(r.code == 0);
  const auto pos = r.output.find("PSNR(end) ");
  REQUIRE(pos != std::string::npos);
  const std::string value = r.output.substr(pos + 10, r.output.find(' ', pos + 10) - pos - 10);
  CHECK((value == "inf" || std::stod(value) >= 60.0));
  CHECK(r.output.find("PSNR(init.)") != std::string::npos);
  CHECK(fs::exists(out));
  CHECK(fs::exists(dir / "recon_full_zero_filled.png"));
  CHECK(fs::exists(dir / "recon_full_trace.csv"));

  const auto manifest = nlohmann::json::parse(read_file(dir / "recon_full.manifest.json"));
  CHECK(manifest["command"] == "reconstruct");
  CHECK(manifest["config"]["mu1"] == 10.0);
  CHECK(manifest["config"]["mu2"] == 20.0);
  CHECK(manifest["config"]["tol"] == 1e-10);
  CHECK(manifest.contains("started_at"));
  CHECK(manifest["version"] == "0.1.0");
}

TEST_CASE("reconstruct: one iteration writes one trace row") {
  const auto img = phantom(32);
  const auto mask = dir / "r32.png";
  REQUIRE(cli::run("mask --kind random --size 32 --fraction 0.4 -o " + q(mask)).code == 0);
  const auto trace = dir / "one.csv";
  const auto r = cli::run("--quiet reconstruct --image " + q(img) + " --mask " + q(mask) +
                          " --max-iters 1 --trace " + q(trace) + " -o " + q(dir / "one.png"));
  REQUIRE(r.code == 0);
  CHECK(count_lines(read_file(trace)) == 2);
  CHECK(load_trace(trace).size() == 1);
}

TEST_CASE("reconstruct: failures") {
  const auto img = phantom(32);
  auto r = cli::run("reconstruct --image " + q(img) + " --mask " + q(dir / "nope.png") +
                    " -o " + q(dir / "x.png"));
  CHECK(r.code == 1);
  CHECK(r.output.find("nope.png") != std::string::npos);

  const auto mask = dir / "r16.png";
  REQUIRE(cli::run("mask --kind random --size 16 --fraction 0.4 -o " + q(mask)).code == 0);
  r = cli::run("reconstruct --image " + q(img) + " --mask " + q(mask) + " -o " + q(dir / "x.png"));
  CHECK(r.code == 1);
  CHECK(r.output.find("32x32") != std::string::npos);

  r = cli::run("reconstruct --image " + q(img) + " --mask " + q(mask) + " --mu2 -1 -o x.png");
  CHECK(r.code == 2);
}

TEST_CASE("reconstruct: raw k-space input") {
  const auto img = load_image(phantom(32));
  const auto ksp = dir / "p32.ksp";
  save_kspace(TransformPlan(32, 32).forward(img), ksp);
  const auto mask = dir / "r32k.png";
  REQUIRE(cli::run("mask --kind random --size 32 --fraction 1.0 -o " + q(mask)).code == 0);
  const auto out = dir / "from_ksp.png";
  const auto r = cli::run("reconstruct --kspace " + q(ksp) + " --mask " + q(mask) +
                          " --reference " + q(phantom(32)) + " --tol 1e-10 -o " + q(out));
  REQUIRE(r.code == 0);
  CHECK(r.output.find("PSNR(end)") != std::string::npos);
  CHECK(load_image(out) == img);
}

TEST_CASE("eval") {
  const auto a = phantom(32);
  auto r = cli::run("eval " + q(a) + " " + q(a));
  CHECK(r.code == 0);
  CHECK(r.output == "inf\n");

  // Peak 255 and every pixel off by one grey level.
  ComplexImage ref(8, 8), test(8, 8);
  for (std::size_t k = 0; k < 64; ++k) {
    ref[k] = static_cast<double>(4 * k) / 255.0;
    test[k] = static_cast<double>(4 * k + 1) / 255.0;
  }
  ref[63] = 1.0;
  test[63] = 254.0 / 255.0;
  save_image(ref, dir / "ref.png");
  save_image(test, dir / "test.png");
  r = cli::run("eval " + q(dir / "ref.png") + " " + q(dir / "test.png"));
  CHECK(r.code == 0);
  CHECK(r.output == "48.1308\n");

  r = cli::run("eval " + q(a) + " " + q(phantom(64)));
  CHECK(r.code == 1);
}

TEST_CASE("sparsity") {
  const auto img = phantom(64);
  const auto full = dir / "sp_full.png";
  REQUIRE(cli::run("mask --kind random --size 64 --fraction 1.0 -o " + q(full)).code == 0);
  const auto csv = dir / "sp_full.csv";
  REQUIRE(cli::run("sparsity --image " + q(img) + " --mask " + q(full) + " -o " + q(csv)).code == 0);
  std::istringstream in(read_file(csv));
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin,original_edge,original_count,zero_filled_edge,zero_filled_count");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 5);
    CHECK(f[2] == f[4]);
    ++rows;
  }
  CHECK(rows == 64);

  const auto empty = dir / "sp_empty.png";
  save_mask(SamplingMask::empty(64, 64), empty);
  const auto ecsv = dir / "sp_empty.csv";
  REQUIRE(cli::run("sparsity --image " + q(img) + " --mask " + q(empty) + " --bins 8 -o " +
                   q(ecsv)).code == 0);
  const std::string text = read_file(ecsv);
  CHECK(text.find("\n0,0,") != std::string::npos);
  CHECK(text.find(",4096\n1,") != std::string::npos);
}

TEST_CASE("phantom command") {
  const auto out = dir / "blocks.png";
  REQUIRE(cli::run("--seed 4 phantom --kind blocks --rows 40 --cols 48 -o " + q(out)).code == 0);
  CHECK(load_image(out).shape() == Shape{40, 48});
  CHECK(cli::run("phantom --size 8 -o " + q(out)).code == 2);
}

TEST_CASE("manifest-out overrides the default location") {
  const auto m = dir / "custom_manifest.json";
  REQUIRE(cli::run("--manifest-out " + q(m) + " mask --kind random --size 16 --fraction 0.5 -o " +
                   q(dir / "mo.png")).code == 0);
  const auto j = nlohmann::json::parse(read_file(m));
  CHECK(j["config"]["kind"] == "random");
  CHECK(j["seed"] == 0);
}
