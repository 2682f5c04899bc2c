#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "dosnet/dos.hpp"
#include "dosnet/errors.hpp"

using namespace dosnet;

namespace {

DosGrid grid_with(std::initializer_list<double> values) {
  DosGrid g(0.0, 1.0, static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) {
    g.active(i) = std::isfinite(v);
    g.log_g(i) = v;
    ++i;
  }
  return g;
}

double total_mass(const DosGrid& g) {
  double s = 0;
  for (int i = 0; i < g.n_bins(); ++i)
    if (g.active(i)) s += std::exp(g.log_g(i));
  return s;
}

}  // namespace

TEST_CASE("bin lookup") {
  const DosGrid g(-1.0, 1.0, 4);
  CHECK(g.width() == 0.5);
  CHECK(g.bin_of(-1.0) == 0);
  CHECK(g.bin_of(-0.5) == 1);
  CHECK(g.bin_of(0.99) == 3);
  CHECK(g.bin_of(1.0) == 3);
  CHECK(g.bin_of(1.5) == -1);
  CHECK(g.bin_of(-1.5) == -1);
  CHECK(g.bin_hi(3) == 1.0);
}

TEST_CASE("flat profile normalizes to 1/m") {
  const auto g = normalize(grid_with({3.0, 3.0, 3.0, 3.0}));
  for (int i = 0; i < 4; ++i) CHECK(std::exp(g.log_g(i)) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("profile [ln 1, ln 3] normalizes to [0.25, 0.75]") {
  const auto g = normalize(grid_with({0.0, std::log(3.0)}));
  CHECK(std::exp(g.log_g(0)) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::exp(g.log_g(1)) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("inactive bins carry no mass") {
  const auto g = normalize(grid_with({1.0, -std::numeric_limits<double>::infinity(), 2.0}));
  CHECK(g.log_g(1) == -std::numeric_limits<double>::infinity());
  CHECK(total_mass(g) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normalization is stable for large entropies") {
  const auto g = normalize(grid_with({1e6, 1e6 + std::log(3.0)}));
  CHECK(std::exp(g.log_g(0)) == doctest::Approx(0.25));
}

TEST_CASE("a grid compared with itself gives zeros") {
  const auto g = normalize(grid_with({0.0, 1.0, -std::numeric_limits<double>::infinity(), 2.0}));
  for (const auto& row : compare(g, g)) {
    if (row.flag == Evidence::Both) CHECK(row.log_ratio == 0.0);
  }
  CHECK(compare(g, g).size() == 3);
}

TEST_CASE("one-sided bins are flagged") {
  const double ninf = -std::numeric_limits<double>::infinity();
  const auto a = normalize(grid_with({0.0, 0.0, ninf}));
  const auto b = normalize(grid_with({0.0, ninf, 0.0}));
  const auto rows = compare(a, b);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].flag == Evidence::Both);
  CHECK(rows[1].flag == Evidence::OnlyA);
  CHECK(rows[1].log_ratio == std::numeric_limits<double>::infinity());
  CHECK(rows[2].flag == Evidence::OnlyB);
  CHECK(rows[2].log_ratio == ninf);
}

TEST_CASE("mismatched binnings cannot be compared") {
  CHECK_THROWS(compare(DosGrid(0, 1, 4), DosGrid(0, 1, 5)));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK_THROWS(compare(normalize(grid_with({0.0, ninf})), normalize(grid_with({ninf, 0.0}))));
}

TEST_CASE("csv round trip is exact") {
  auto g = normalize(grid_with({0.1, std::log(7.0), -std::numeric_limits<double>::infinity(), 1.0 / 3.0}));
  g.hist << 5, 9, 0, 12;
  std::ostringstream out;
  write_dos_csv(out, g);
  CHECK(out.str().rfind("q_lo,q_hi,log_g_norm,hist,active\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_dos_csv(in);
  CHECK(back.same_binning(g));
  CHECK((back.active == g.active).all());
  CHECK(back.hist == g.hist);
  for (int i = 0; i < g.n_bins(); ++i)
    if (g.active(i)) CHECK(back.log_g(i) == g.log_g(i));
  std::ostringstream again;
  write_dos_csv(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("malformed csv is an input error") {
  std::istringstream bad("q_lo,q_hi,log_g_norm,hist,active\n0,1,abc,0,1\n");
  CHECK_THROWS_AS(read_dos_csv(bad), InputError);
  std::istringstream header("nope\n");
  CHECK_THROWS_AS(read_dos_csv(header), InputError);
}
