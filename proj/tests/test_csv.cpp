#include <doctest.h>

#include "proxtext/csv.hpp"
#include "proxtext/synth.hpp"

#include <filesystem>

using namespace proxtext;

TEST_CASE("csv parsing") {
  const auto t = csv::parse("#schema=proxtext.table/1\nA, Y ,\"C\"\n1,2.5,-3e-2\n0,+1,4\n\n");
  CHECK(t.schema == "proxtext.table/1");
  CHECK(t.header == std::vector<std::string>{"A", "Y", "C"});
  CHECK(t.rows() == 2);
  CHECK(t.column("C")[0] == -0.03);
  CHECK(t.column("Y")[1] == 1.0);

  CHECK_THROWS_AS(csv::parse("A,B\n1\n"), DataError);
  CHECK_THROWS_AS(csv::parse("A,B\n1,x\n"), DataError);
  CHECK_THROWS_AS(csv::parse("A,A\n1,2\n"), DataError);
  CHECK_THROWS_AS(csv::parse("# only a comment\n"), DataError);
}

TEST_CASE("datasets survive a csv round trip bit-exactly") {
  synth::SynthParams p;
  p.n = 300;
  p.seed = 17;
  const auto original = synth::generate_fully_synthetic(p);
  const auto text = csv::format(csv::from_dataset(original));
  CHECK(text.rfind("#schema=proxtext.table/1\nA,Y,U,C,X1_train1,", 0) == 0);

  csv::ColumnRoles roles;
  roles.covariates = {"C"};
  roles.u = "U";
  const auto back = csv::to_dataset(csv::parse(text), roles);
  CHECK(back.a == original.a);
  CHECK(back.y == original.y);
  CHECK(*back.u == *original.u);
  CHECK(back.covariate("C") == original.covariate("C"));
  REQUIRE(back.blocks.size() == 4);
  for (const auto& [name, block] : original.blocks) {
    CHECK(back.blocks.at(name).names == block.names);
    CHECK(back.blocks.at(name).values == block.values);
  }
  CHECK(back.extra.empty());
}

TEST_CASE("role mapping validates columns") {
  const auto t = csv::parse("A,Y,W,Z,other\n1,0.5,1,0,3\n0,1.5,0,1,4\n");
  csv::ColumnRoles roles;
  roles.w = "W";
  roles.z = "Z";
  const auto d = csv::to_dataset(t, roles);
  CHECK(*d.w == BinaryColumn{1, 0});
  CHECK(d.extra.count("other") == 1);

  roles.covariates = {"missing"};
  CHECK_THROWS_AS(csv::to_dataset(t, roles), DataError);

  const auto bad = csv::parse("A,Y\n2,0.5\n0,1\n");
  CHECK_THROWS_AS(csv::to_dataset(bad, csv::ColumnRoles{}), DataError);

  const auto constant = csv::parse("A,Y,W,Z\n1,0.5,1,0\n0,1.5,1,1\n");
  csv::ColumnRoles wz;
  wz.w = "W";
  wz.z = "Z";
  CHECK_THROWS_AS(csv::to_dataset(constant, wz), DegenerateProxyError);
}

TEST_CASE("file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "proxtext_csv_test.csv";
  csv::Table t;
  t.add("a", {0.1, 1.0 / 3.0});
  t.add("b", {1e-300, -2.5});
  csv::write(path, t);
  const auto back = csv::read(path);
  CHECK(back.column("a") == t.column("a"));
  CHECK(back.column("b") == t.column("b"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(csv::read(path), DataError);
}
