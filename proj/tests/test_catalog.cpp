#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ddx2/catalog.hpp"
#include "ddx2/manifest.hpp"

using namespace ddx2;

TEST(Catalog, RoundTrip) {
  auto rows = read_catalog(std::string(DDX2_DATA_DIR) + "/extremal_circulants.ndjson");
  ASSERT_EQ(rows.size(), 22u);
  std::ostringstream out;
  write_catalog(out, rows);
  std::istringstream in(out.str());
  EXPECT_EQ(read_catalog(in), rows);
  EXPECT_EQ(to_line(rows[0]), R"({"d":2,"n":5,"generators":[1],"self_inverse_included":false})");
}

TEST(Catalog, PublishedValues) {
  auto rows = read_catalog(std::string(DDX2_DATA_DIR) + "/extremal_circulants.ndjson");
  const std::uint64_t orders[] = {5,  8,  13, 16,  21,  26,  35,  42,  51,  56,  67,
                                  80, 90, 96, 112, 130, 138, 156, 171, 192, 210, 216};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].d, i + 2);
    EXPECT_EQ(rows[i].n, orders[i]) << rows[i].d;
    EXPECT_EQ(rows[i].self_inverse_included, rows[i].d % 2 == 1);
    EXPECT_EQ(rows[i].generators.size(), rows[i].d / 2);
  }
}

TEST(Catalog, StrictParsing) {
  EXPECT_THROW(parse_record_line("not json"), MalformedRecord);
  EXPECT_THROW(parse_record_line("[1,2]"), MalformedRecord);
  EXPECT_THROW(parse_record_line(R"({"d":2,"n":5,"generators":[1]})"), MalformedRecord);
  EXPECT_THROW(parse_record_line(R"({"d":2,"n":5,"generators":[1],"self_inverse_included":false,"x":1})"),
               MalformedRecord);
  EXPECT_THROW(parse_record_line(R"({"d":-2,"n":5,"generators":[1],"self_inverse_included":false})"),
               MalformedRecord);
  EXPECT_THROW(parse_record_line(R"({"d":2,"n":5,"generators":["1"],"self_inverse_included":false})"),
               MalformedRecord);
  EXPECT_THROW(parse_record_line(R"({"d":2,"n":5,"generators":[1],"self_inverse_included":0})"), MalformedRecord);
}

TEST(Catalog, ErrorsCarryLineNumbers) {
  std::istringstream in("{\"d\":2,\"n\":5,\"generators\":[1],\"self_inverse_included\":false}\n\n{oops}\n");
  try {
    read_catalog(in);
    FAIL();
  } catch (const MalformedRecord& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Catalog, FamilyJsonAndCsv) {
  auto f = family_from_table(VariantKind::CyclicGalois, 9, {1}, {3}, {0});
  auto j = to_json(f, 5);
  EXPECT_EQ(j["coefficient"], "9/25");
  EXPECT_EQ(j["variant"], "cyclic");
  auto back = family_from_json(j);
  EXPECT_EQ(back, f);
  EXPECT_EQ(family_csv_row(f, 5), "5,cyclic,9,1,3,0,9,25");
  EXPECT_THROW(family_from_json(Json{{"l", 5}}), MalformedRecord);
}

TEST(Manifest, DigestCoversResultsOnly) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  auto dir = std::filesystem::temp_directory_path() / "ddx2_manifest_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "out.ndjson").string();
  RunManifest m;
  m.command = "search extremal";
  m.parameters = {{"d", "6"}};
  m.started = m.finished = utc_timestamp();
  write_results(path, "abc", m);
  std::ifstream side(manifest_path(path));
  auto back = RunManifest::from_json(Json::parse(side));
  EXPECT_EQ(back.result_digest, sha256_hex("abc"));
  EXPECT_EQ(back.command, "search extremal");
  EXPECT_EQ(back.parameters.at("d"), "6");
  EXPECT_EQ(back.status, "complete");
  EXPECT_EQ(back.tool_version, kToolVersion);
  std::filesystem::remove_all(dir);
}
