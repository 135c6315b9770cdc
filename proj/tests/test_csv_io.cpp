#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "fastcv/csv_io.hpp"
#include "fastcv/errors.hpp"

using namespace fastcv;

namespace {

struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& content)
      : path(std::string(std::tmpnam(nullptr)) + ".csv") {
    std::ofstream os(path);
    os << content;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv parses labels and features, skips comments") {
  TempCsv f("# header comment\n"
            "5,1.5,2.5\n"
            "9,-1.0,0.25\n"
            "5,3.0,4.0\n");
  Dataset ds = load_csv(f.path);
  CHECK(ds.n_samples() == 3);
  CHECK(ds.n_features() == 2);
  CHECK(ds.n_classes == 2);
  // labels remapped ascending: 5 -> 1, 9 -> 2
  CHECK(ds.labels == std::vector<int>{1, 2, 1});
  CHECK(ds.features(0, 0) == doctest::Approx(1.5));
  CHECK(ds.features(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("load_csv reports the offending line on malformed input") {
  TempCsv f("1,1.0,2.0\n"
            "2,oops,3.0\n");
  try {
    load_csv(f.path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("load_csv rejects ragged rows") {
  TempCsv f("1,1.0,2.0\n"
            "2,3.0\n");
  CHECK_THROWS_AS(load_csv(f.path), ParseError);
}

TEST_CASE("load_csv on a missing file raises IoError") {
  CHECK_THROWS_AS(load_csv("/no/such/file.csv"), IoError);
}
