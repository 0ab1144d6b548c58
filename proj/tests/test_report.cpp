#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "qdurr/report.hpp"

using namespace qdurr;

TEST(Table, CsvLayout) {
  Table t({"n", "name", "value"});
  t.add_metadata("tool", "x");
  t.add_row({std::int64_t{3}, std::string("a"), 0.1});
  t.add_row({std::int64_t{-4}, std::monostate{}, 1.0 / 3.0});
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_EQ(out.str(),
            "# tool: x\n"
            "n,name,value\n"
            "3,a,0.10000000000000001\n"
            "-4,,0.33333333333333331\n");
}

TEST(Table, RealsRoundTrip) {
  for (double v : {0.1, 1e-300, -2.5e17, 1.0 / 7.0, 0.0}) {
    EXPECT_EQ(std::stod(Table::format_real(v)), v);
  }
}

TEST(Table, JsonMirrorsColumns) {
  Table t({"x", "value"});
  t.add_metadata("command", "eval");
  t.add_row({0.0, 1.5});
  t.add_row({1.0, std::nan("")});
  const auto doc = t.to_json();
  EXPECT_EQ(doc["metadata"]["command"], "eval");
  ASSERT_EQ(doc["columns"]["x"].size(), 2u);
  EXPECT_EQ(doc["columns"]["value"][0], 1.5);
  EXPECT_TRUE(doc["columns"]["value"][1].is_null());
  std::ostringstream out;
  t.write_json(out);
  EXPECT_EQ(nlohmann::json::parse(out.str())["columns"]["x"][1], 1.0);
}

TEST(Table, RowWidthChecked) {
  Table t({"a", "b"});
  EXPECT_THROW(t.add_row({1.0}), DomainError);
}

TEST(Table, ReportColumns) {
  RateReport rate{0.9, {1, 2}, {{5, 0.1, 0.5, 0.2}, {6, 0.05, 0.0, std::nullopt}}, 0.2};
  const Table t = to_table(rate);
  EXPECT_EQ(t.columns(), (std::vector<std::string>{"n", "q", "varpi", "vartheta", "sup_diff", "omega", "ratio"}));
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_NE(out.str().find("6,0.90000000000000002,1,2,0.050000000000000003,0,\n"), std::string::npos);

  const std::uint64_t ns[] = {10};
  const double values[] = {0.5};
  const Table d = density_table(AlphaBetaPair::classical(), 1.0, ns, values);
  EXPECT_EQ(d.rows().size(), 1u);
  EXPECT_EQ(std::get<std::int64_t>(d.rows()[0][1]), 1);
  EXPECT_EQ(std::get<std::int64_t>(d.rows()[0][2]), 10);
}

TEST(Table, OrderCell) {
  EXPECT_EQ(std::get<std::string>(order_cell(Order::infinite())), "inf");
  EXPECT_EQ(std::get<std::int64_t>(order_cell(Order::finite(12))), 12);
}
