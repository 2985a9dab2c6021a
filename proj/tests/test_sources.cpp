#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "sonify/diagnostics.hpp"
#include "sonify/parameters.hpp"
#include "sonify/sources.hpp"
#include "sonify/table.hpp"

using namespace sonify;

namespace {

Table one_column(std::string name, std::vector<double> v) {
  Table t;
  t.add_column(std::move(name), std::move(v));
  return t;
}

struct WarningCounter {
  int count = 0;
  ScopedWarningSink sink{[this](std::string_view) { ++count; }};
};

}  // namespace

// Table 1, row by row: name, map, evolve.
TEST(Parameters, FlagMatrixMatchesTable) {
  struct Row {
    const char* name;
    bool map, evolve;
  };
  const Row rows[] = {
      {"polar", true, true},
      {"azimuth", true, true},
      {"volume", true, true},
      {"pitch", true, false},
      {"time", true, false},
      {"cutoff", true, true},
      {"time_evo", false, true},
      {"spectrum", true, false},
      {"pitch_shift", true, true},
      {"volume_envelope/A", true, false},
      {"volume_envelope/D", true, false},
      {"volume_envelope/S", true, false},
      {"volume_envelope/R", true, false},
      {"volume_lfo/freq", true, false},
      {"volume_lfo/freq_shift", true, true},
      {"volume_lfo/amount", true, true},
      {"pitch_lfo/freq", true, false},
      {"pitch_lfo/freq_shift", true, true},
      {"pitch_lfo/amount", true, true},
  };
  ASSERT_EQ(all_parameters().size(), std::size(rows));
  for (std::size_t i = 0; i < std::size(rows); ++i) {
    const auto p = parse_parameter(rows[i].name);
    EXPECT_EQ(name(p), rows[i].name);
    EXPECT_EQ(is_mappable(p), rows[i].map) << rows[i].name;
    EXPECT_EQ(is_evolvable(p), rows[i].evolve) << rows[i].name;
    EXPECT_EQ(all_parameters()[i].name, rows[i].name);
  }
  EXPECT_THROW(parse_parameter("radius"), ConfigError);
  EXPECT_FALSE(find_parameter("volume_envelope/X"));
}

TEST(Parameters, Defaults) {
  EXPECT_DOUBLE_EQ(*info(ParameterId::azimuth).default_value, 0.0);
  EXPECT_DOUBLE_EQ(*info(ParameterId::polar).default_value, std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(*info(ParameterId::volume).default_value, 1.0);
  EXPECT_DOUBLE_EQ(*info(ParameterId::pitch).default_value, 0.5);
  EXPECT_DOUBLE_EQ(*info(ParameterId::time).default_value, 0.0);
  EXPECT_DOUBLE_EQ(*info(ParameterId::cutoff).default_value, 1.0);
  EXPECT_DOUBLE_EQ(*info(ParameterId::pitch_shift).default_value, 0.0);
  EXPECT_FALSE(info(ParameterId::volume_lfo_amount).default_value);
}

TEST(MapParameter, FullRangeAffine) {
  const std::vector<double> data{0, 5, 10};
  const auto out = map_parameter(data, MapLimits::percentiles(0, 100, 0, 1));
  EXPECT_EQ(out, (std::vector<double>{0, 0.5, 1}));
}

TEST(MapParameter, DataUnitsClipAboveHi) {
  const std::vector<double> data{0, 5, 10};
  const auto out = map_parameter(data, MapLimits::data_units(0, 5, 0, 1));
  EXPECT_EQ(out, (std::vector<double>{0, 1, 1}));
}

TEST(MapParameter, PercentileTenToNinetyMatchesOracle) {
  const std::vector<double> data{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto got = map_parameter(data, MapLimits::percentiles(10, 90, 0, 100));
  const auto want = oracle::map_percentile(data, 10, 90, 0, 100);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << i;
  // frozen: L = 1.9, H = 9.1
  EXPECT_NEAR(got[4], (5 - 1.9) / (9.1 - 1.9) * 100, 1e-12);
}

TEST(MapParameter, DegenerateWarnsAndMapsToLow) {
  WarningCounter w;
  const std::vector<double> data{3, 3, 3};
  const auto out = map_parameter(data, MapLimits::percentiles(0, 100, 0.2, 0.8));
  EXPECT_EQ(out, (std::vector<double>{0.2, 0.2, 0.2}));
  EXPECT_EQ(w.count, 1);
}

TEST(MapParameter, Errors) {
  EXPECT_THROW(map_parameter({}, MapLimits::percentiles(0, 100, 0, 1)), DataError);
  const std::vector<double> d{1, 2};
  EXPECT_THROW(map_parameter(d, MapLimits::percentiles(50, 50, 0, 1)), ConfigError);
  EXPECT_THROW(map_parameter(d, MapLimits::percentiles(-1, 50, 0, 1)), ConfigError);
  EXPECT_THROW(map_parameter(d, MapLimits::percentiles(0, 101, 0, 1)), ConfigError);
  EXPECT_THROW(map_parameter(d, MapLimits::data_units(0, 1, 1, 0)), ConfigError);
  const std::vector<double> bad{1, NAN};
  EXPECT_THROW(map_parameter(bad, MapLimits::percentiles(0, 100, 0, 1)), DataError);
}

TEST(MapParameter, DomainCheck) {
  EXPECT_THROW(validate(MapLimits::percentiles(0, 100, 0, 2), ParameterId::volume), ConfigError);
  EXPECT_THROW(validate(MapLimits::percentiles(0, 100, 0, 4), ParameterId::polar), ConfigError);
  EXPECT_NO_THROW(validate(MapLimits::percentiles(0, 100, 0, 36), ParameterId::pitch_shift));
}

TEST(EventSet, CountFromRows) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> brightness(2500), color(2500);
  for (auto& v : brightness) v = u(gen);
  for (auto& v : color) v = u(gen);
  Table t;
  t.add_column("brightness", brightness);
  t.add_column("color", color);
  const std::vector<Mapping> maps{{ParameterId::time, "brightness"}, {ParameterId::pitch, "color"}};
  const auto set = build_event_set(t, maps);
  EXPECT_EQ(set.count(), 2500u);
  EXPECT_EQ(set.mapped(ParameterId::time).size(), 2500u);
  EXPECT_EQ(set.mapped(ParameterId::pitch).size(), 2500u);
}

TEST(EventSet, OneRowNoMappingsUsesDefaults) {
  const auto t = one_column("x", {42});
  const auto set = build_event_set(t, {});
  EXPECT_EQ(set.count(), 1u);
  EXPECT_DOUBLE_EQ(*set.value(ParameterId::volume, 0), 1.0);
  EXPECT_DOUBLE_EQ(*set.value(ParameterId::polar, 0), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(*set.value(ParameterId::time, 0), 0.0);
  EXPECT_FALSE(set.is_mapped(ParameterId::pitch));
}

TEST(EventSet, PitchShiftAlongsideTimeMatchesOracle) {
  Table t;
  t.add_column("a", {3, 1, 4, 1, 5, 9, 2, 6});
  t.add_column("b", {2, 7, 1, 8, 2, 8, 1, 8});
  const std::vector<Mapping> maps{
      {ParameterId::time, "a"},
      {ParameterId::pitch_shift, "b", MapLimits::percentiles(5, 95, 0, 12)}};
  const auto set = build_event_set(t, maps);
  const auto want_t = oracle::map_percentile({3, 1, 4, 1, 5, 9, 2, 6}, 0, 100, 0, 1);
  const auto want_p = oracle::map_percentile({2, 7, 1, 8, 2, 8, 1, 8}, 5, 95, 0, 12);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(*set.value(ParameterId::time, i), want_t[i], 1e-12);
    EXPECT_NEAR(*set.value(ParameterId::pitch_shift, i), want_p[i], 1e-12);
  }
}

TEST(EventSet, Errors) {
  Table t;
  t.add_column("a", {1, 2});
  const std::vector<Mapping> dup{{ParameterId::time, "a"}, {ParameterId::time, "a"}};
  EXPECT_THROW(build_event_set(t, dup), ConfigError);
  const std::vector<Mapping> not_mappable{{ParameterId::time_evo, "a"}};
  EXPECT_THROW(build_event_set(t, not_mappable), ConfigError);
  const std::vector<Mapping> missing{{ParameterId::time, "nope"}};
  try {
    build_event_set(t, missing);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
  }
  Table ragged;
  ragged.add_column("a", {1, 2});
  EXPECT_THROW(ragged.add_column("b", {1}), DataError);
}

TEST(EventSet, SpectrumIsStoredRaw) {
  const auto t = one_column("s", {0, 2, 5, 1});
  const std::vector<Mapping> maps{{ParameterId::spectrum, "s"}};
  const auto set = build_event_set(t, maps);
  EXPECT_EQ(set.count(), 1u);
  EXPECT_EQ(std::vector<double>(set.spectrum().begin(), set.spectrum().end()),
            (std::vector<double>{0, 2, 5, 1}));
  const auto zero = one_column("s", {0, 0});
  EXPECT_THROW(build_event_set(zero, maps), DataError);
}

TEST(ObjectSource, TwoEvolutions) {
  Table t;
  t.add_column("age", {0, 1, 2, 4, 8});
  t.add_column("Z", {0.1, 0.2, 0.25, 0.5, 1.0});
  t.add_column("SFR", {5, 3, 2, 1, 0.5});
  const std::vector<Mapping> maps{{ParameterId::cutoff, "Z"},
                                  {ParameterId::pitch_shift, "SFR"}};
  const auto src = build_object_source(t, "age", maps);
  EXPECT_TRUE(src.evolves(ParameterId::cutoff));
  EXPECT_TRUE(src.evolves(ParameterId::pitch_shift));
  EXPECT_TRUE(src.evolves(ParameterId::time_evo));
  EXPECT_EQ(src.evolutions().size(), 3u);  // two mappings + the time grid
  EXPECT_EQ(src.evolution(ParameterId::cutoff)->grid,
            (std::vector<double>{0, 0.125, 0.25, 0.5, 1}));
}

TEST(ObjectSource, ConstantSeries) {
  Table t;
  t.add_column("t", {0, 1, 2});
  t.add_column("v", {4, 4, 4});
  WarningCounter w;
  const std::vector<Mapping> maps{{ParameterId::volume, "v", MapLimits::percentiles(0, 100, 0.3, 1)}};
  const auto src = build_object_source(t, "t", maps);
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0})
    EXPECT_DOUBLE_EQ(evaluate_evolution(src, ParameterId::volume, x), 0.3);
}

TEST(ObjectSource, IrregularGridMidpoints) {
  const std::vector<double> time{0, 0.5, 1.7, 2.0, 4.1, 4.2, 7.0};
  const std::vector<double> v{0, 3, 1, 4, 1, 5, 9};
  Table t;
  t.add_column("t", time);
  t.add_column("v", v);
  const std::vector<Mapping> maps{
      {ParameterId::pitch_shift, "v", MapLimits::data_units(0, 9, 0, 9)}};
  const auto src = build_object_source(t, "t", maps);
  for (std::size_t i = 0; i + 1 < time.size(); ++i) {
    const double mid = (time[i] + time[i + 1]) / 2 / 7.0;
    EXPECT_NEAR(evaluate_evolution(src, ParameterId::pitch_shift, mid), (v[i] + v[i + 1]) / 2,
                1e-12);
  }
}

TEST(ObjectSource, Errors) {
  Table t;
  t.add_column("t", {0, 2, 1});
  t.add_column("v", {1, 2, 3});
  const std::vector<Mapping> ok{{ParameterId::volume, "v"}};
  EXPECT_THROW(build_object_source(t, "t", ok), DataError);  // non-monotonic

  Table good;
  good.add_column("t", {0, 1, 2});
  good.add_column("v", {1, 2, 3});
  const std::vector<Mapping> pitch{{ParameterId::pitch, "v"}};
  EXPECT_THROW(build_object_source(good, "t", pitch), ConfigError);
  const std::vector<Mapping> env{{ParameterId::volume_envelope_attack, "v"}};
  EXPECT_THROW(build_object_source(good, "t", env), ConfigError);
  const std::vector<Mapping> te{{ParameterId::time_evo, "v"}};
  EXPECT_THROW(build_object_source(good, "t", te), ConfigError);
  EXPECT_THROW(build_object_source(good, "missing", ok), DataError);
  EXPECT_THROW(build_object_source(good, "t", ok, {{ParameterId::volume, 0.5}}), ConfigError);
  EXPECT_THROW(build_object_source(good, "t", {}, {{ParameterId::volume, 2.0}}), ConfigError);
}

TEST(ObjectSource, StaticValues) {
  Table t;
  t.add_column("t", {0, 1});
  const auto src = build_object_source(t, "t", {}, {{ParameterId::azimuth, 1.25}});
  EXPECT_DOUBLE_EQ(evaluate_evolution(src, ParameterId::azimuth, 0.3), 1.25);
  EXPECT_DOUBLE_EQ(evaluate_evolution(src, ParameterId::volume, 0.3), 1.0);
}

TEST(Evolution, LinearMidpointAndClamp) {
  Table t;
  t.add_column("t", {0, 1});
  t.add_column("v", {0, 10});
  const std::vector<Mapping> maps{
      {ParameterId::pitch_shift, "v", MapLimits::data_units(0, 10, 0, 10)}};
  const auto src = build_object_source(t, "t", maps);
  EXPECT_DOUBLE_EQ(evaluate_evolution(src, ParameterId::pitch_shift, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(evaluate_evolution(src, ParameterId::pitch_shift, -0.2), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_evolution(src, ParameterId::pitch_shift, 1.5), 10.0);
}

TEST(Evolution, RandomGridMatchesOracle) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> time(20), v(20);
  double acc = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    acc += 0.01 + u(gen);
    time[i] = acc;
    v[i] = u(gen) * 12;
  }
  Table t;
  t.add_column("t", time);
  t.add_column("v", v);
  const std::vector<Mapping> maps{
      {ParameterId::pitch_shift, "v", MapLimits::data_units(0, 12, 0, 12)}};
  const auto src = build_object_source(t, "t", maps);
  std::vector<double> grid(20);
  for (std::size_t i = 0; i < 20; ++i) grid[i] = (time[i] - time[0]) / (time[19] - time[0]);
  for (int q = 0; q < 100; ++q) {
    const double x = u(gen);
    EXPECT_NEAR(evaluate_evolution(src, ParameterId::pitch_shift, x), oracle::interp(grid, v, x),
                1e-9);
  }
}

TEST(Table, ThreeByTwo) {
  const auto t = parse_table("a,b\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.column_count(), 2u);
  EXPECT_EQ(t.column("a").size(), 3u);
  EXPECT_EQ(t.column("b")[2], 6.0);
}

TEST(Table, HeaderOnlyIsEmpty) {
  try {
    parse_table("a,b\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("empty table"), std::string::npos);
  }
}

TEST(Table, ScientificNotationEqualsDecimal) {
  const auto t = parse_table("x,y\n1.5e3,1500\n2.5E-2,0.025\n-7e0,-7\n+3.0e+1,30\n");
  for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_EQ(t.column("x")[i], t.column("y")[i]);
}

TEST(Table, RaggedAndNonNumericReportPosition) {
  try {
    parse_table("a,b\n1,2\n3\n");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    parse_table("a,b\n1,2\n3,abc\n");
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_table("a,b\n1,\n"), DataError);
  EXPECT_THROW(parse_table("a,a\n1,2\n"), DataError);
}

TEST(Table, BomCommentsQuotesAndBlankLines) {
  const auto t = parse_table("\xEF\xBB\xBF# comment\n\"a\", b \n\n1, 2\r\n# x\n3,4\n");
  EXPECT_EQ(t.names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(t.rows(), 2u);
}
