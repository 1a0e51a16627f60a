#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "gbzk/config.hpp"
#include "gbzk/error.hpp"
#include "gbzk/snapshot.hpp"

using namespace gbzk;

namespace {

int error_line(const std::string& text) {
  try {
    parse_ini(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("ini parsing") {
  const IniDocument d = parse_ini("# header\n[grid]\nnx = 64 ; trailing\n\nlx=2.5\n[solver]\nname = a#b\n");
  REQUIRE(d.sections.size() == 2);
  const IniSection* g = d.find("grid");
  REQUIRE(g);
  CHECK(g->line == 2);
  REQUIRE(g->entries.size() == 2);
  CHECK(g->entries[0].value == "64");
  CHECK(g->entries[0].line == 3);
  CHECK(g->entries[1].value == "2.5");
  CHECK(d.find("solver")->entries[0].value == "a#b");
  CHECK(d.find("output") == nullptr);

  CHECK(error_line("[a\nx=1\n") == 1);
  CHECK(error_line("[a]\nx 1\n") == 2);
  CHECK(error_line("x = 1\n") == 1);
  CHECK(error_line("[a]\nx=1\n\nx=2\n") == 4);
  CHECK(error_line("[a]\n[a]\n") == 2);
  CHECK(error_line("[]\n") == 1);
  CHECK(error_line("[a]\nbad key = 1\n") == 2);
}

TEST_CASE("section reader") {
  const IniDocument d = parse_ini("[s]\nx = 1.5\nn = 12\nf = yes\nl = 1, 2 ,inf\nt = hello\nz = 3\n[other]\n");
  SectionReader r(d, "s");
  CHECK(r.number("x", 0.0) == 1.5);
  CHECK(r.number("missing", 7.0) == 7.0);
  CHECK(r.integer("n", 0) == 12);
  CHECK(r.flag("f", false));
  const auto l = r.numbers("l", {});
  REQUIRE(l.size() == 3);
  CHECK(l[1] == 2.0);
  CHECK(std::isinf(l[2]));
  CHECK(r.text("t", "") == "hello");
  CHECK(r.line_of("z") == 7);
  try {
    r.finish();
    FAIL("unknown key not reported");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 7);
  }
  CHECK_THROWS_AS(SectionReader(d, "s").number("nope"), ConfigError);
  CHECK_THROWS_AS(SectionReader(d, "s").integer("x", 0), ConfigError);
  CHECK_THROWS_AS(SectionReader(d, "s").flag("t", false), ConfigError);
  CHECK_THROWS_AS(SectionReader(d, "s").number("t", 0.0), ConfigError);
  CHECK_NOTHROW(SectionReader(d, "absent").finish());

  CHECK_NOTHROW(check_sections(d, {"s", "oth*"}));
  CHECK_THROWS_AS(check_sections(d, {"s"}), ConfigError);
}

TEST_CASE("numbers, hashing and formatting") {
  CHECK(parse_number(" -2.5e-3 ", 1, "v") == -2.5e-3);
  CHECK(parse_number("+4", 1, "v") == 4.0);
  CHECK(parse_number("inf", 1, "v") == std::numeric_limits<double>::infinity());
  CHECK(parse_number("-inf", 1, "v") == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(parse_number("1.0x", 3, "v"), ConfigError);
  CHECK_THROWS_AS(parse_number("", 3, "v"), ConfigError);

  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  for (double v : {M_PI, -1e-300, 12345.678, 5e-324}) CHECK(parse_number(format_double(v), 1, "v") == v);
}

TEST_CASE("snapshot round trip") {
  const GridSpec g = make_grid(16, 8, 3.0, 5.0);
  Snapshot s{sample(g, [](double x, double y) { return std::sin(3 * x) * std::exp(-y * y) + 1e-17 * x; }), 0.35, 1.25};
  const std::string bytes = encode_snapshot(s);
  CHECK(bytes.size() == 4 + 3 * 4 + 4 * 8 + 16 * 8 * 8);
  CHECK(bytes.compare(0, 4, "GBZK") == 0);
  std::uint32_t v = 0;
  std::memcpy(&v, bytes.data() + 4, 4);
  CHECK(v == kSnapshotVersion);

  const Snapshot r = decode_snapshot(bytes);
  CHECK(r.field.grid.nx() == 16);
  CHECK(r.field.grid.ny() == 8);
  CHECK(r.field.grid.lx() == 3.0);
  CHECK(r.field.grid.ly() == 5.0);
  CHECK(r.a == 0.35);
  CHECK(r.t == 1.25);
  CHECK(std::memcmp(r.field.samples.data(), s.field.samples.data(), s.field.samples.size() * sizeof(double)) == 0);
  CHECK(encode_snapshot(r) == bytes);

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad), FormatError);
  bad = bytes;
  bad[4] = 9;
  CHECK_THROWS_AS(decode_snapshot(bad), FormatError);
  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, 20)), FormatError);
  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, bytes.size() - 8)), FormatError);
  CHECK_THROWS_AS(decode_snapshot(bytes + "x"), FormatError);
  CHECK_THROWS_AS(read_snapshot("/nonexistent/dir/x.gbzk"), IoError);
}
