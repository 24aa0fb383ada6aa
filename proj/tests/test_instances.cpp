#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cflp/instance.hpp"
#include "cflp/rng.hpp"

using namespace cflp;

TEST_CASE("splitmix64 reference stream") {
  // reference outputs for seed 1234567 (standard splitmix64 test vector)
  SplitMix64 rng(1234567ull);
  CHECK(rng.next() == 6457827717110365317ull);
  CHECK(rng.next() == 3203168211198807973ull);
  CHECK(rng.next() == 9817491932198370423ull);
  CHECK(rng.next() == 4593380528125082431ull);
  CHECK(rng.next() == 16408922859458223821ull);
}

TEST_CASE("open interval draws stay strictly inside") {
  SplitMix64 rng(7);
  for (int k = 0; k < 10000; ++k) {
    double x = rng.next_open(50.0, 100.0);
    CHECK(x > 50.0);
    CHECK(x < 100.0);
  }
}

TEST_CASE("generator dimensions and ranges") {
  Instance inst = generate_instance(5, 2, 42);
  CHECK(inst.num_customers == 5);
  CHECK(inst.num_facilities == 2);
  CHECK(inst.transport_cost.size() == 10);
  for (double c : inst.transport_cost) {
    CHECK(c > 50.0);
    CHECK(c < 100.0);
  }
  for (double f : inst.fixed_cost) {
    CHECK(f > 1000.0);
    CHECK(f < 1500.0);
  }
  for (double d : inst.demand) {
    CHECK(d > 50.0);
    CHECK(d < 100.0);
  }
  for (double s : inst.capacity) {
    CHECK(s > 2000.0);
    CHECK(s < 2500.0);
  }
  CHECK(validate_instance(inst).ok());
}

TEST_CASE("generator is deterministic") {
  Instance a = generate_instance(7, 3, 123456789ull);
  Instance b = generate_instance(7, 3, 123456789ull);
  CHECK(a.transport_cost == b.transport_cost);
  CHECK(a.fixed_cost == b.fixed_cost);
  CHECK(a.demand == b.demand);
  CHECK(a.capacity == b.capacity);
  Instance c = generate_instance(7, 3, 123456790ull);
  CHECK(a.transport_cost != c.transport_cost);
}

TEST_CASE("generator draw order: c row-major, then f, d, s") {
  Instance inst = generate_instance(2, 3, 99);
  SplitMix64 rng(99);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(inst.cost(i, j) == rng.next_open(50.0, 100.0));
  for (int j = 0; j < 3; ++j) CHECK(inst.fixed_cost[j] == rng.next_open(1000.0, 1500.0));
  for (int i = 0; i < 2; ++i) CHECK(inst.demand[i] == rng.next_open(50.0, 100.0));
  for (int j = 0; j < 3; ++j) CHECK(inst.capacity[j] == rng.next_open(2000.0, 2500.0));
}

TEST_CASE("single-cell generated instance is always solvable") {
  Instance inst = generate_instance(1, 1, 0);
  CHECK(validate_instance(inst).ok());
  CHECK(inst.capacity[0] > inst.demand[0]);
}

TEST_CASE("validation flags insufficient capacity") {
  Instance inst;
  inst.num_customers = 2;
  inst.num_facilities = 1;
  inst.fixed_cost = {10.0};
  inst.capacity = {5.0};
  inst.demand = {10.0, 10.0};
  inst.transport_cost = {1.0, 1.0};
  auto r = validate_instance(inst);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == Violation::Kind::InsufficientCapacity);
  CHECK(r.violations[0].message.find("total capacity 5") != std::string::npos);
  CHECK(r.violations[0].message.find("total demand 20") != std::string::npos);
}

TEST_CASE("validation names the offending index") {
  Instance inst = generate_instance(3, 2, 5);
  inst.cost(1, 0) = -2.5;
  auto r = validate_instance(inst);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == Violation::Kind::NegativeCost);
  CHECK(r.violations[0].i == 1);
  CHECK(r.violations[0].j == 0);
}

TEST_CASE("validation flags dimension mismatch") {
  Instance inst = generate_instance(3, 2, 5);
  inst.demand.push_back(60.0);
  auto r = validate_instance(inst);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].kind == Violation::Kind::DimensionMismatch);
}

TEST_CASE("file round-trip is exact") {
  for (std::uint64_t seed : {0ull, 1ull, 31337ull}) {
    Instance a = generate_instance(6, 4, seed);
    std::stringstream ss;
    write_instance(a, ss);
    Instance b = read_instance(ss);
    CHECK(a.num_customers == b.num_customers);
    CHECK(a.num_facilities == b.num_facilities);
    CHECK(a.fixed_cost == b.fixed_cost);
    CHECK(a.capacity == b.capacity);
    CHECK(a.demand == b.demand);
    CHECK(a.transport_cost == b.transport_cost);
  }
}

TEST_CASE("write is byte deterministic") {
  Instance a = generate_instance(4, 2, 77);
  std::stringstream s1, s2;
  write_instance(a, s1);
  write_instance(a, s2);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("reader reports parse errors with line numbers") {
  SUBCASE("empty file") {
    std::stringstream ss("");
    try {
      read_instance(ss);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("wrong value count on the demand line") {
    std::stringstream ss("cflp 1\n2 1\n100\n500\n60 70 80\n10\n20\n");
    try {
      read_instance(ss);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
      CHECK(std::string(e.what()).find("expected 2") != std::string::npos);
    }
  }
  SUBCASE("garbage token") {
    std::stringstream ss("cflp 1\n1 1\nzzz\n500\n60\n10\n");
    CHECK_THROWS_AS(read_instance(ss), ParseError);
  }
  SUBCASE("comments and blank lines are skipped") {
    std::stringstream ss("# header comment\ncflp 1\n\n1 1\n# costs\n100\n500\n60\n10\n");
    Instance inst = read_instance(ss);
    CHECK(inst.fixed_cost[0] == 100.0);
    CHECK(inst.cost(0, 0) == 10.0);
  }
}
