#include "doctest.h"
#include "nestex/bio.h"
#include "nestex/rng.h"

using namespace nestex;

TEST_CASE("bio_encode examples") {
  CHECK(bio_encode({{{0, 2}, "Attack"}}, 3) == TagSequence{"B-Attack", "I-Attack", "O"});
  CHECK(bio_encode({}, 2) == TagSequence{"O", "O"});
  CHECK(bio_encode({{{0, 1}, "X"}, {{1, 2}, "Y"}}, 2) == TagSequence{"B-X", "B-Y"});
}

TEST_CASE("bio_encode overlap handling") {
  const std::vector<LabeledSpan> overlapping = {{{0, 2}, "X"}, {{1, 3}, "Y"}};
  CHECK_THROWS_AS(bio_encode(overlapping, 3), BioError);
  CHECK(bio_encode(overlapping, 3, false) == TagSequence{"B-X", "I-X", "O"});
  CHECK_THROWS(bio_encode({{{2, 4}, "X"}}, 3));
}

TEST_CASE("bio_decode examples") {
  CHECK(bio_decode({"B-Attack", "I-Attack", "O"}) ==
        std::vector<LabeledSpan>{{{0, 2}, "Attack"}});
  CHECK(bio_decode({"O", "I-X"}) == std::vector<LabeledSpan>{{{1, 2}, "X"}});
  try {
    bio_decode({"O", "I-X"}, true);
    FAIL("expected BioError");
  } catch (const BioError& e) {
    CHECK(e.position() == 1);
  }
  // An I tag of a different label starts a new span in lenient mode.
  CHECK(bio_decode({"B-X", "I-Y"}) ==
        std::vector<LabeledSpan>{{{0, 1}, "X"}, {{1, 2}, "Y"}});
  CHECK_THROWS(bio_decode({"Q-X"}));
}

TEST_CASE("decode inverts encode on random span sets") {
  Rng rng(17);
  const std::vector<std::string> labels = {"A", "B", "Attack"};
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(12));
    std::vector<LabeledSpan> spans;
    int pos = static_cast<int>(rng.index(3));
    while (pos < n) {
      const int len = 1 + static_cast<int>(rng.index(3));
      if (pos + len > n) break;
      spans.push_back({{pos, pos + len}, rng.pick(labels)});
      pos += len + static_cast<int>(rng.index(3));
    }
    REQUIRE(bio_decode(bio_encode(spans, n), true) == spans);
  }
}

TEST_CASE("integer tag set") {
  const TagSet tags({"Intention", "Attack"});
  CHECK(tags.size() == 5);
  CHECK(tags.begin_tag(1) == 3);
  CHECK(tags.inside_tag(1) == 4);
  CHECK(tags.name(0) == "O");
  CHECK(tags.name(3) == "B-Attack");
  CHECK(tags.index("I-Intention") == 2);
  CHECK(tags.index("B-Nope") == -1);
  const std::vector<TagSet::IndexedSpan> spans = {{{0, 1}, 0}, {{2, 4}, 1}};
  const auto ids = tags.encode(spans, 5);
  CHECK(ids == std::vector<int>{1, 0, 3, 4, 0});
  CHECK(tags.decode(ids) == spans);
  CHECK(tags.names(ids) == TagSequence{"B-Intention", "O", "B-Attack", "I-Attack", "O"});
}
