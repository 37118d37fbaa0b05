#include <doctest.h>

#include <string>

#include "gnnlab/config.hpp"
#include "gnnlab/csv.hpp"
#include "gnnlab/error.hpp"
#include "gnnlab/sha256.hpp"
#include "gnnlab/svg.hpp"

using namespace gnnlab;

TEST_CASE("config parses sections, lists and comments") {
  auto cfg = Config::parse(
      "# sweep configuration\n"
      "[dataset]\n"
      "path = graphs/demo.txt\n"
      "[sweep]\n"
      "b = 10, 20, 40\n"
      "beta = 1 2\n"
      "seeds = 7\n");
  CHECK(cfg.get("dataset", "path") == "graphs/demo.txt");
  CHECK(cfg.get_int_list("sweep", "b") == std::vector<std::int64_t>{10, 20, 40});
  CHECK(cfg.get_int_list("sweep", "beta") == std::vector<std::int64_t>{1, 2});
  CHECK(cfg.get_int_or("sweep", "missing", 5) == 5);
}

TEST_CASE("unknown keys and sections are hard errors") {
  auto cfg = Config::parse("[sweep]\nb = 1\nbta = 2\n");
  CHECK_THROWS_AS(cfg.validate_keys({{"sweep", {"b", "beta"}}}), InputError);

  auto cfg2 = Config::parse("[swep]\nb = 1\n");
  CHECK_THROWS_AS(cfg2.validate_keys({{"sweep", {"b"}}}), InputError);

  CHECK_THROWS_AS(Config::parse("b = 1\n"), ParseError);     // outside section
  CHECK_THROWS_AS(Config::parse("[s]\nnovalue\n"), ParseError);
}

TEST_CASE("config round-trips through serialize") {
  auto cfg = Config::parse("[a]\nx = 1\ny = two words\n[b]\nz = 3\n");
  auto back = Config::parse(cfg.serialize());
  CHECK(back.get("a", "y") == "two words");
  CHECK(back.get_int("b", "z") == 3);
}

TEST_CASE("csv round-trips with 17 significant digits") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{csv_double(0.1), "x"}, {csv_double(1.0 / 3.0), ""}};
  auto text = t.serialize();
  CHECK(text.find("\r") == std::string::npos);
  auto back = parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows[0][0] == csv_double(0.1));
  CHECK(back.rows[1][1].empty());
  CHECK(back.column("b") == 1);
  CHECK(back.column("missing") == -1);
}

TEST_CASE("sha256 matches the empty-string and abc vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("line chart renders one polyline per series") {
  LineChart chart;
  chart.title = "iteration-to-loss";
  chart.x_label = "b";
  chart.y_label = "iterations";
  chart.series.push_back({"beta=1", {{10, 120}, {20, 150}}});
  chart.series.push_back({"beta=2", {{10, 90}, {20, 110}}});
  auto svg = chart.render();
  CHECK(svg.find("<svg") == 0);

  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == 2);
  CHECK(svg.find("beta=2") != std::string::npos);
}
