// Copyright 2026 The twopass Authors.
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

#include <doctest.h>

#include "test_util.h"
#include "twopass/fst/weight.h"

using namespace twopass;
using namespace twopass::testing;

TEST_CASE("tropical identities") {
  TropicalWeight a(1.5);
  CHECK(Plus(a, TropicalWeight::Zero()) == a);
  CHECK(Times(a, TropicalWeight::One()) == a);
  CHECK(Times(a, TropicalWeight::Zero()).IsZero());
  CHECK(Plus(TropicalWeight(2.0), TropicalWeight(-1.0)).Value() == -1.0);
  CHECK(Divide(TropicalWeight(3.0), TropicalWeight(1.0)).Value() == 2.0);
  CHECK(Divide(TropicalWeight::Zero(), a).IsZero());
  CHECK_FALSE(TropicalWeight(-kInfinity).IsMember());
  CHECK(TropicalWeight::Zero().IsMember());
}

TEST_CASE("tropical semiring laws on random weights") {
  Rng rng(11);
  auto draw = [&] {
    return RandUnit(rng) < 0.1 ? TropicalWeight::Zero() : TropicalWeight(0.25 * RandInt(rng, -8, 8));
  };
  for (int i = 0; i < 500; ++i) {
    TropicalWeight a = draw(), b = draw(), c = draw();
    CHECK(Plus(a, b) == Plus(b, a));
    CHECK(Plus(Plus(a, b), c) == Plus(a, Plus(b, c)));
    CHECK(Times(Times(a, b), c) == Times(a, Times(b, c)));
    CHECK(Times(a, Plus(b, c)) == Plus(Times(a, b), Times(a, c)));
    CHECK(Plus(a, a) == a);
    if (!a.IsZero()) CHECK(Times(a, Divide(b, a)) == b);
  }
}

TEST_CASE("approximate equality") {
  CHECK(ApproxEqual(TropicalWeight(1.0), TropicalWeight(1.0 + 1e-12)));
  CHECK_FALSE(ApproxEqual(TropicalWeight(1.0), TropicalWeight(1.001)));
  CHECK(ApproxEqual(TropicalWeight::Zero(), TropicalWeight::Zero()));
  CHECK_FALSE(ApproxEqual(TropicalWeight::Zero(), TropicalWeight(1e300)));
}
