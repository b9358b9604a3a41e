#include <doctest.h>

#include <sstream>

#include "eigencert/config.hpp"
#include "eigencert/error.hpp"
#include "test_util.hpp"

using namespace eigencert;

namespace {

const char* const kSquare = R"(# comment
[domain]
kind = unit_square

[discretization]
element = p1
levels = 8 16 32

[clusters]
1 = 1 1
2 = 2 3

[bounds]
enclosures = exact_square
ch = formula_0493h
iterations = 3
mode = gershgorin
)";

RunConfig parse(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_config(in, base);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("square config parses") {
  const auto cfg = parse(kSquare);
  CHECK(cfg.domain.kind == DomainKind::unit_square);
  CHECK(cfg.element == ElementKind::p1);
  CHECK(cfg.levels == std::vector<int>{8, 16, 32});
  CHECK(cfg.clusters.size() == 2);
  CHECK(cfg.clusters.last(2) == 3);
  CHECK(cfg.enclosure_source == EnclosureSource::exact_square);
  CHECK(cfg.ch_source == ChSource::formula_0493h);
  CHECK(cfg.iterations == 3);
  CHECK(cfg.mode == EpsilonMode::gershgorin);
  CHECK(cfg.extra_eigenpairs == 5);
}

TEST_CASE("shipped configs parse and resolve data paths") {
  const auto square = read_config(testutil::source_dir() / "configs" / "square.cfg");
  CHECK(square.levels == std::vector<int>{8, 16, 32, 64});
  CHECK(square.clusters.total() == 6);
  const auto dumbbell = read_config(testutil::source_dir() / "configs" / "dumbbell.cfg");
  CHECK(dumbbell.domain.kind == DomainKind::dumbbell);
  CHECK(dumbbell.enclosure_source == EnclosureSource::file);
  CHECK(std::filesystem::exists(dumbbell.enclosure_path));
  CHECK(std::filesystem::exists(dumbbell.ch_path));
  CHECK(dumbbell.clusters.last(4) == 12);
}

TEST_CASE("relative paths resolve against the base directory") {
  const auto cfg = parse(R"([domain]
kind = dumbbell
[discretization]
levels = 2
[clusters]
1 = 1 2
[bounds]
enclosures = enc.txt
ch = sub/ch.txt
)",
                         "/data/run");
  CHECK(cfg.enclosure_path == std::filesystem::path("/data/run/enc.txt"));
  CHECK(cfg.ch_path == std::filesystem::path("/data/run/sub/ch.txt"));
}

TEST_CASE("configuration errors name the offending field") {
  const std::string dumbbell_no_enc = R"([domain]
kind = dumbbell
[discretization]
levels = 2 3
[clusters]
1 = 1 2
[bounds]
ch = x.txt
)";
  CHECK(error_of(dumbbell_no_enc).find("bounds.enclosures") != std::string::npos);
  CHECK(error_of(replace(kSquare, "kind = unit_square", "kind = disc")).find("domain.kind") != std::string::npos);
  CHECK(error_of(replace(kSquare, "levels = 8 16 32", "levels = 16 8")).find("discretization.levels") !=
        std::string::npos);
  CHECK(error_of(replace(kSquare, "levels = 8 16 32", "levels = 8 x")).find("discretization.levels") !=
        std::string::npos);
  CHECK(error_of(replace(kSquare, "2 = 2 3", "2 = 3 4")).find("clusters") != std::string::npos);
  CHECK(error_of(replace(kSquare, "2 = 2 3", "3 = 2 3")).find("clusters") != std::string::npos);
  CHECK(error_of(replace(kSquare, "mode = gershgorin", "mode = fast")).find("bounds.mode") != std::string::npos);
  CHECK(error_of(replace(kSquare, "iterations = 3", "iterations = -1")).find("bounds.iterations") !=
        std::string::npos);
  CHECK(error_of(replace(kSquare, "mode = gershgorin", "colour = red")).find("bounds.colour") != std::string::npos);
  CHECK(error_of(replace(kSquare, "[bounds]", "[limits]")).find("limits") != std::string::npos);
  CHECK(error_of(replace(kSquare, "element = p1", "element = p2")).find("discretization.element") !=
        std::string::npos);
  CHECK(error_of(replace(replace(kSquare, "kind = unit_square", "kind = dumbbell"), "ch = formula_0493h",
                         "ch = t.txt"))
            .find("bounds.enclosures") != std::string::npos);
  CHECK_THROWS_AS(read_config(testutil::source_dir() / "configs" / "missing.cfg"), ConfigError);
}
