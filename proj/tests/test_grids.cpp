#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pathbs/field.hpp"
#include "pathbs/grid.hpp"
#include "pathbs/pvar.hpp"
#include "pathbs/rng.hpp"

using namespace pathbs;

namespace {

SampledPath brownian_path(const TimeGrid& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v{0.0};
  for (std::size_t k = 0; k + 1 < g.size(); ++k)
    v.push_back(v.back() + rng.normal() * std::sqrt(g[k + 1] - g[k]));
  return SampledPath::scalar(g, std::move(v));
}

// exhaustive sup over all sub-partitions; exponential, for small grids only
double brute_force_pvar(const TwoParamField& field, double p) {
  const std::size_t n = field.grid().size();
  const std::size_t interior = n - 2;
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << interior); ++mask) {
    std::vector<std::size_t> part{0};
    for (std::size_t b = 0; b < interior; ++b)
      if (mask & (std::size_t{1} << b)) part.push_back(b + 1);
    part.push_back(n - 1);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < part.size(); ++k)
      s += std::pow(field.norm(part[k], part[k + 1]), p);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST_CASE("time grid validation") {
  CHECK_THROWS(TimeGrid({0.5, 1.0}));
  CHECK_THROWS(TimeGrid({0.0, 0.5, 0.5, 1.0}));
  CHECK_THROWS(TimeGrid({0.0}));
  const auto g = TimeGrid::dyadic(2.0, 3);
  CHECK(g.size() == 9);
  CHECK(g.mesh() == doctest::Approx(0.25));
  CHECK(g.refines(g.coarsen(2)));
  CHECK(g.index_of(0.75) == 3);
  CHECK_THROWS(g.index_of(0.3));
}

TEST_CASE("increments field is additive and matches the identity path") {
  const TimeGrid g({0.0, 0.5, 1.0});
  std::vector<double> id{0.0, 0.5, 1.0};
  const auto f = increments_field(SampledPath::scalar(g, id));
  CHECK(f.value(0, 2) == doctest::Approx(1.0));
  CHECK(f.value(0, 1) == doctest::Approx(0.5));
  CHECK(delta_defect(f, 0.0, 0.5, 1.0)[0] == doctest::Approx(0.0));

  const auto c = increments_field(SampledPath::scalar(g, {2.0, 2.0, 2.0}));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) CHECK(c.value(i, j) == 0.0);

  // random path: defect vanishes on every triple of a larger grid
  const auto bm = brownian_path(TimeGrid::dyadic(1.0, 5), 7);
  const auto fi = increments_field(bm);
  CHECK(max_delta_defect(fi).max_defect < 1e-12);
}

TEST_CASE("delta defect of a square-gap field") {
  const TimeGrid g({0.0, 0.5, 1.0});
  TwoParamField f(g, FieldShape::Scalar);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) f.value(i, j) = std::pow(g[j] - g[i], 2.0);
  CHECK(delta_defect(f, 0.0, 0.5, 1.0)[0] == doctest::Approx(0.5));
  CHECK_THROWS(delta_defect(f, 0.5, 0.0, 1.0));
}

TEST_CASE("p-variation basics") {
  // monotone increments: coarsest partition attains the sup at p = 2
  const auto idf = increments_field(
      SampledPath::scalar(TimeGrid({0.0, 0.25, 0.5, 1.0}), {0.0, 0.25, 0.5, 1.0}));
  CHECK(p_variation(idf, 2.0, PVarMode::Exact).value == doctest::Approx(1.0));

  // zigzag 0 -> 1 -> 0 at p = 1 is the total variation
  const auto zig =
      increments_field(SampledPath::scalar(TimeGrid({0.0, 0.5, 1.0}), {0.0, 1.0, 0.0}));
  CHECK(p_variation(zig, 1.0, PVarMode::Exact).value == doctest::Approx(2.0));

  CHECK_THROWS(p_variation(zig, 0.5, PVarMode::Exact));
}

TEST_CASE("exact p-variation equals brute-force partition enumeration") {
  const auto g = TimeGrid::uniform(1.0, 11);  // 12 points, 2^10 sub-partitions
  const auto path = brownian_path(g, 42);
  const auto f = increments_field(path);
  const double dp = p_variation(f, 2.0, PVarMode::Exact).value;
  const double brute = brute_force_pvar(f, 2.0);
  CHECK(dp == doctest::Approx(brute).epsilon(1e-12));
  // dyadic mode can only undershoot
  CHECK(p_variation(f, 2.0, PVarMode::DyadicLowerBound).value <= dp + 1e-12);
  CHECK(p_variation(f, 2.0, PVarMode::DyadicLowerBound).lower_bound);
}

TEST_CASE("p-variation is nonincreasing in p for small fields") {
  const auto g = TimeGrid::uniform(1.0, 9);
  auto path = brownian_path(g, 3);
  // scale so all increments are <= 1 in absolute value
  double m = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i)
    for (std::size_t j = 0; j < path.size(); ++j)
      m = std::max(m, std::fabs(path.at(j, 0) - path.at(i, 0)));
  std::vector<double> scaled;
  for (std::size_t k = 0; k < path.size(); ++k) scaled.push_back(path.at(k, 0) / (2.0 * m));
  const auto f = increments_field(SampledPath::scalar(g, scaled));
  double prev = p_variation(f, 1.0, PVarMode::Exact).value;
  for (double p : {1.5, 2.0, 2.5, 3.0}) {
    const double cur = p_variation(f, p, PVarMode::Exact).value;
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("restriction monotonicity under concatenation") {
  const auto g = TimeGrid::dyadic(1.0, 4);
  const auto path = brownian_path(g, 11);
  const auto f = increments_field(path);
  const std::size_t mid = g.size() / 2;
  const double whole = p_variation(f, 2.5, PVarMode::Exact).value;
  const double left = p_variation_window(f, 2.5, PVarMode::Exact, 0, mid).value;
  const double right = p_variation_window(f, 2.5, PVarMode::Exact, mid, g.size() - 1).value;
  CHECK(whole >= std::max(left, right) - 1e-12);
  CHECK(whole >= left + right - 1e-12);  // superadditivity of the exact value
}

TEST_CASE("control field validation and oscillation") {
  const auto g = TimeGrid::uniform(1.0, 10);
  const auto omega = ControlField::length(g);
  CHECK(control_osc(omega, 0.1) == doctest::Approx(0.1));
  CHECK(control_osc(omega, 0.35) == doctest::Approx(0.3));
  CHECK_THROWS(control_osc(omega, 0.0));

  // sqrt(t-s) is subadditive, not superadditive: must be rejected
  TwoParamField bad(g, FieldShape::Scalar);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j) bad.value(i, j) = std::sqrt(g[j] - g[i]);
  CHECK_THROWS(ControlField(std::move(bad)));

  // p-variation control of a constant path vanishes
  const auto zero = path_control(SampledPath::scalar(g, std::vector<double>(g.size(), 1.0)), 2.0);
  CHECK(zero(0, g.size() - 1) == doctest::Approx(g.horizon()));  // only the |t-s| part

  // cell-sum control of sampled noise matches a direct near-diagonal scan
  const auto bm = brownian_path(g, 5);
  const auto ctrl = path_control(bm, 2.0);
  double direct = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i; j < g.size(); ++j)
      if (g[j] - g[i] <= 0.21) {
        double cells = g[j] - g[i];
        for (std::size_t k = i; k < j; ++k)
          cells += std::pow(std::fabs(bm.at(k + 1, 0) - bm.at(k, 0)), 2.0);
        direct = std::max(direct, cells);
      }
  CHECK(control_osc(ctrl, 0.21) == doctest::Approx(direct));
}

TEST_CASE("csv path round trip and strict parsing") {
  const auto g = TimeGrid({0.0, 0.25, 1.0});
  std::vector<double> vals{1.0, 2.5, -0.125, 3.0, 4.0, 5.0};
  const SampledPath p(g, vals, 2);
  const std::string file = "test_path_roundtrip.csv";
  write_path_csv(file, p);
  const auto back = read_path_csv(file);
  REQUIRE(back.dimension() == 2);
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.at(k, i) == p.at(k, i));
  std::remove(file.c_str());

  auto write_and_try = [](const std::string& body) {
    const std::string f = "test_bad_path.csv";
    std::ofstream out(f);
    out << body;
    out.close();
    bool threw = false;
    try {
      read_path_csv(f);
    } catch (const std::exception&) {
      threw = true;
    }
    std::remove(f.c_str());
    return threw;
  };
  CHECK(write_and_try("t,x1\n0,1\n0,2\n1,3\n"));       // duplicate time
  CHECK(write_and_try("t,x1\n0,1\n0.5,nan\n1,3\n"));   // NaN value
  CHECK(write_and_try("t,x1\n0,1\n1,inf\n"));          // Inf value
  CHECK(write_and_try("t,x1\n1,1\n0,2\n"));            // unsorted
  CHECK(write_and_try("time,x1\n0,1\n1,2\n"));         // bad header
}
