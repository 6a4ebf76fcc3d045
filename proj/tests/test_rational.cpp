// Copyright 2026 the lotsplit project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "lotsplit/rational.hpp"

using namespace lotsplit;

TEST_CASE("parse_rational handles integers and fractions") {
  CHECK(parse_rational("7") == Rat(7));
  CHECK(parse_rational("-3") == Rat(-3));
  CHECK(parse_rational("3/4") == make_rat(3, 4));
  CHECK(parse_rational("-6/8") == make_rat(-3, 4));
  CHECK(parse_rational("0") == 0);
}

TEST_CASE("parse_rational rejects junk") {
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1 /2"), std::invalid_argument);
  CHECK_THROWS_AS(make_rat(1, 0), std::invalid_argument);
}

TEST_CASE("string round trip is bit exact") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    long num = static_cast<long>(rng() % 2001) - 1000;
    long den = static_cast<long>(rng() % 50) + 1;
    Rat q = make_rat(num, den);
    CHECK(parse_rational(to_string(q)) == q);
  }
  CHECK(to_string(make_rat(-6, 8)) == "-3/4");
  CHECK(to_string(Rat(5)) == "5");
}

TEST_CASE("floor and integrality") {
  CHECK(floor_rat(make_rat(3, 2)) == 1);
  CHECK(floor_rat(make_rat(-3, 2)) == -2);
  CHECK(floor_rat(Rat(5)) == 5);
  CHECK(is_integer(Rat(4)));
  CHECK(is_integer(make_rat(8, 4)));
  CHECK_FALSE(is_integer(make_rat(1, 2)));
}

TEST_CASE("join_rationals") {
  CHECK(join_rationals({Rat(1), make_rat(1, 2), Rat(-3)}) == "1,1/2,-3");
  CHECK(join_rationals({}) == "");
}
