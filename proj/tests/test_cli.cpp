#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ddx2/catalog.hpp"
#include "ddx2/manifest.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run ddx2_run(const std::string& args) {
  std::string cmd = std::string(DDX2_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Scratch {
public:
  Scratch() {
    dir_ = std::filesystem::temp_directory_path() /
           ("ddx2_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  ~Scratch() { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
  std::filesystem::path dir_;
};

ddx2::RunManifest read_manifest(const std::string& output) {
  std::ifstream in(ddx2::manifest_path(output));
  return ddx2::RunManifest::from_json(nlohmann::ordered_json::parse(in));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, VerifyCirculantExitCodes) {
  auto ok = ddx2_run("verify circulant --n 13 --gens 1,5");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("diameter 2: yes"), std::string::npos) << ok.out;
  auto bad = ddx2_run("verify circulant --n 14 --gens 1,5");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("3, 7, 11"), std::string::npos) << bad.out;
  EXPECT_EQ(ddx2_run("verify circulant --n 42 --gens 1,5,14,17 --self-inverse").code, 0);
  EXPECT_EQ(ddx2_run("verify circulant --n 13").code, 2);
  EXPECT_EQ(ddx2_run("frobnicate").code, 2);
}

TEST(Cli, VerifyFamily) {
  EXPECT_EQ(ddx2_run("verify family --variant cyclic --n 9 --U 1 --V 3 --W 0 --p 5").code, 0);
  EXPECT_EQ(ddx2_run("verify family --variant cyclic --n 9 --U 1 --V 3 --W 0 --p 7").code, 2);
  EXPECT_EQ(ddx2_run("verify family --variant cyclic --n 9 --U 1 --V 3 --W 0 --p 9").code, 2);
}

TEST(Cli, VerifyCatalogFlagsPublishedRows) {
  auto r = ddx2_run(std::string("verify catalog ") + DDX2_DATA_DIR + "/extremal_circulants.ndjson");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("d=18 n=138: degree 18, diameter 2 no"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("d=20 n=171: degree 20, diameter 2 no"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("d=23 n=216: degree 23, diameter 2 yes"), std::string::npos) << r.out;
}

TEST(Cli, MalformedCatalogIsUsageError) {
  Scratch s;
  std::ofstream(s.path("bad.ndjson")) << "{\"d\":2}\n";
  EXPECT_EQ(ddx2_run("verify catalog " + s.path("bad.ndjson")).code, 2);
}

TEST(Cli, SearchFamily) {
  auto r = ddx2_run("--format csv search family --l 5 --variant cyclic");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("l,variant,n,U,V,W,coefficient_num,coefficient_den"), std::string::npos);
  EXPECT_NE(r.out.find("5,cyclic,9,1,3,0,9,25"), std::string::npos) << r.out;
  auto a = ddx2_run("--format json search family --l 4 --variant abelian");
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("\"n\":6"), std::string::npos) << a.out;
}

TEST(Cli, SearchExtremalWritesManifest) {
  Scratch s;
  auto out = s.path("d6.ndjson");
  auto r = ddx2_run("--output " + out + " search extremal --d 6");
  EXPECT_EQ(r.code, 0);
  auto results = slurp(out);
  EXPECT_EQ(results, "{\"d\":6,\"n\":21,\"generators\":[1,2,8],\"self_inverse_included\":false}\n");
  auto m = read_manifest(out);
  EXPECT_EQ(m.command, "search extremal");
  EXPECT_EQ(m.status, "complete");
  EXPECT_EQ(m.parameters.at("d"), "6");
  EXPECT_EQ(m.parameters.at("n_max"), "25");
  EXPECT_EQ(m.result_digest, ddx2::sha256_hex(results));
}

TEST(Cli, TimeBudgetExhaustedExitsThree) {
  Scratch s;
  auto out = s.path("d14.ndjson");
  auto r = ddx2_run("--time-budget 1 --output " + out + " search extremal --d 14");
  EXPECT_EQ(r.code, 3);
  auto m = read_manifest(out);
  EXPECT_EQ(m.status, "budget_exhausted");
  ASSERT_TRUE(m.parameters.count("frontier"));
  EXPECT_GT(std::stoull(m.parameters.at("frontier")), 90u);
  EXPECT_EQ(m.result_digest, ddx2::sha256_hex(slurp(out)));
}

TEST(Cli, Bounds) {
  auto r = ddx2_run("bounds --d 23");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mac_upper 288"), std::string::npos) << r.out;
  auto j = ddx2_run("--format json bounds --d 22");
  EXPECT_EQ(j.code, 0);
  auto parsed = nlohmann::json::parse(j.out);
  EXPECT_EQ(parsed["mac_upper"], "265");
  EXPECT_EQ(parsed["construction_orders"]["MSS-circulant"], 180);
  auto lac = ddx2_run("--format json bounds --d 10 --delta 0 0 1 0");
  EXPECT_EQ(nlohmann::json::parse(lac.out)["lac_lower"], 46);
  EXPECT_EQ(ddx2_run("bounds --d 9 --delta 0 ? 0 0").code, 2);
  EXPECT_EQ(ddx2_run("bounds construction --id Vetrik --p 7").code, 0);
  EXPECT_EQ(ddx2_run("bounds construction --id MSS-circulant --p 7").code, 2);
  auto ch = ddx2_run("--format json bounds cullinan-hajir --base 9/25 --epsilon 0.001310 --k 3 --multiplier 5");
  EXPECT_EQ(ch.code, 0);
  EXPECT_NE(ch.out.find("0.35812"), std::string::npos) << ch.out;
  auto cap = ddx2_run("bounds cap --m 2 --variant cyclic-c0");
  EXPECT_NE(cap.out.find("37/4"), std::string::npos) << cap.out;
  auto coef = ddx2_run("bounds coefficient --n 13 --l 6");
  EXPECT_NE(coef.out.find("0.361"), std::string::npos) << coef.out;
  auto uac = ddx2_run("bounds uac --s 1 --t 3");
  EXPECT_NE(uac.out.find("3/16"), std::string::npos) << uac.out;
}

TEST(Cli, Fit) {
  auto r = ddx2_run(std::string("--format json fit ") + DDX2_DATA_DIR + "/extremal_circulants.ndjson");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("a") && j.contains("b") && j.contains("c") && j.contains("residual")) << r.out;

  Scratch s;
  std::ofstream(s.path("two.ndjson")) << "{\"d\":2,\"n\":5,\"generators\":[1],\"self_inverse_included\":false}\n"
                                      << "{\"d\":4,\"n\":13,\"generators\":[1,5],\"self_inverse_included\":false}\n";
  EXPECT_EQ(ddx2_run("fit " + s.path("two.ndjson")).code, 2);

  std::ofstream parabola(s.path("parabola.ndjson"));
  for (int d = 2; d <= 8; ++d)
    parabola << "{\"d\":" << d << ",\"n\":" << d * d << ",\"generators\":[1],\"self_inverse_included\":false}\n";
  parabola.close();
  auto p = ddx2_run("--format json fit " + s.path("parabola.ndjson"));
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(nlohmann::json::parse(p.out)["residual"], "0") << p.out;
}

TEST(Cli, DigestIndependentOfJobs) {
  Scratch s;
  for (const char* cmd : {"search extremal --d 9", "search family --l 8 --variant cyclic",
                          "search family --l 7 --variant abelian"}) {
    auto one = s.path("one.ndjson");
    auto eight = s.path("eight.ndjson");
    ASSERT_EQ(ddx2_run("--jobs 1 --output " + one + " " + cmd).code, 0) << cmd;
    ASSERT_EQ(ddx2_run("--jobs 8 --output " + eight + " " + cmd).code, 0) << cmd;
    EXPECT_EQ(read_manifest(one).result_digest, read_manifest(eight).result_digest) << cmd;
  }
}
