#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chargeq/dataset_io.hpp"
#include "chargeq/errors.hpp"
#include "chargeq/format.hpp"

using namespace chargeq;

TEST_CASE("format_number") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.265928998126) == "0.265928998126");
  CHECK(format_number(17.2) == "17.2");
  CHECK(format_number(1e-4) == "0.0001");
  CHECK(format_number(2.5e-5) == "2.5e-05");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-3.625) == "-3.625");
}

TEST_CASE("output formats") {
  CHECK(parse_output_format("csv") == OutputFormat::csv);
  CHECK(parse_output_format("json") == OutputFormat::json);
  CHECK_THROWS_AS(parse_output_format("xml"), ContractViolation);
  CHECK(extension(OutputFormat::csv) == ".csv");
  CHECK(extension(OutputFormat::json) == ".json");
}

TEST_CASE("to_csv: header, markers and line endings") {
  FigureDataset ds;
  ds.columns = {"t", "e_j", "c"};
  ds.rows = {{0.01, 0, 0}, {0.01, 0.02, 0.5}, {0.5, 1, 2.5e-5}};
  ds.marker_columns = {"marker_e_j", "marker_c"};
  ds.markers = {{3.625, 0.27}};
  CHECK(to_csv(ds) ==
        "t,e_j,c,marker_e_j,marker_c\n"
        "0.01,0,0,3.625,0.27\n"
        "0.01,0.02,0.5,,\n"
        "0.5,1,2.5e-05,,\n");
  CHECK(serialize(ds, OutputFormat::csv) == to_csv(ds));
}

TEST_CASE("to_csv / parse_csv round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 50; ++trial) {
    FigureDataset ds;
    ds.columns = {"a", "b", "c"};
    for (int r = 0; r < 40; ++r) ds.rows.push_back({u(rng), u(rng) * 1e-7, std::round(u(rng))});
    if (trial % 2) {
      ds.marker_columns = {"marker_x"};
      ds.markers = {{u(rng)}, {u(rng)}};
    }
    const std::string text = to_csv(ds);
    const auto back = parse_csv(text);
    REQUIRE(back.columns == ds.columns);
    REQUIRE(back.marker_columns == ds.marker_columns);
    REQUIRE(back.rows.size() == ds.rows.size());
    REQUIRE(back.markers.size() == ds.markers.size());
    for (std::size_t r = 0; r < ds.rows.size(); ++r)
      for (std::size_t c = 0; c < 3; ++c)
        REQUIRE(back.rows[r][c] == doctest::Approx(ds.rows[r][c]).epsilon(1e-11));
    // Serialization is a fixed point after one round.
    REQUIRE(to_csv(back) == text);
  }
}

TEST_CASE("parse_csv: errors") {
  CHECK_THROWS_AS(parse_csv(""), ContractViolation);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ContractViolation);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), ContractViolation);
  CHECK_THROWS_AS(parse_csv("marker_a,b\n1,2\n"), ContractViolation);
  CHECK_THROWS_AS(parse_csv("a,b\n1,\n"), ContractViolation);
}

TEST_CASE("to_json: structure") {
  FigureDataset ds;
  ds.figure_id = "fig1";
  ds.columns = {"e_j", "c"};
  ds.rows = {{0, 0}, {1, 1.0 / 3.0}};
  ds.metadata = {{"figure", "fig1"}, {"tool_version", "x"}};
  ds.marker_columns = {"marker_e_j", "marker_c"};
  ds.markers = {{3.625, 0.27}};
  const std::string text = to_json(ds);
  CHECK(text.back() == '\n');
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["metadata"]["figure"] == "fig1");
  CHECK(doc["columns"] == nlohmann::json({"e_j", "c"}));
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][1][1].get<double>() == 0.333333333333);
  CHECK(doc["markers"]["columns"][0] == "marker_e_j");
  CHECK(doc["markers"]["rows"][0][1].get<double>() == 0.27);
  // Key order is stable.
  CHECK(text.find("\"metadata\"") < text.find("\"columns\""));
  CHECK(text.find("\"columns\"") < text.find("\"rows\""));

  ds.marker_columns.clear();
  ds.markers.clear();
  CHECK_FALSE(nlohmann::json::parse(to_json(ds)).contains("markers"));
}

TEST_CASE("write_file: bytes on disk") {
  const auto path = std::filesystem::temp_directory_path() / "chargeq_write_file_test.csv";
  write_file(path, "a,b\n1,2\n");
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(buffer.str() == "a,b\n1,2\n");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_file("/nonexistent-dir/x.csv", "x"), Error);
}
