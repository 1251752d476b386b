#include <set>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "karyograph/name_codec.hpp"
#include "test_support.hpp"

using namespace karyograph;
using testsupport::desk_atlas;
using testsupport::desk_corpus_lines;

TEST_CASE("mangling follows the four substitution rules") {
  CHECK(mangle("45,X").text == "k45_X");
  CHECK(mangle("46,XX").text == "k46_XX");
  CHECK(mangle("46,XX,t(2;5)(q21;q31)").text == "k46_XX_t!2_5!!q21_q31!");
  CHECK(mangle("46,XX,inv(2)(p21q31)").text == "k46_XX_inv!2!!p21q31!");
}

TEST_CASE("mangled names satisfy the safe-name invariants") {
  for (const std::string& line : desk_corpus_lines()) {
    SafeName name = mangle(line);
    INFO(line << " -> " << name.text);
    CHECK(is_safe_name(name.text));
    CHECK(name.text.front() == 'k');
    CHECK(name.text.find(',') == std::string::npos);
    CHECK(name.text.find(';') == std::string::npos);
    CHECK(name.text.find('(') == std::string::npos);
    CHECK(name.text.find(')') == std::string::npos);
  }
}

TEST_CASE("demangle inverts mangle across the corpus") {
  for (const std::string& line : desk_corpus_lines()) {
    INFO(line);
    CHECK(demangle(mangle(line), desk_atlas()) == line);
  }
}

TEST_CASE("demangle on the paper's examples") {
  CHECK(demangle(SafeName{"k45_X"}, desk_atlas()) == "45,X");
  CHECK(demangle(SafeName{"k46_XX"}, desk_atlas()) == "46,XX");
  CHECK(demangle(SafeName{"k46_XX_t!2_5!!q21_q31!"}, desk_atlas()) ==
        "46,XX,t(2;5)(q21;q31)");
}

TEST_CASE("mangle is injective over the corpus") {
  std::set<std::string> seen;
  for (const std::string& line : desk_corpus_lines()) {
    CHECK(seen.insert(mangle(line).text).second);
  }
}

TEST_CASE("names without a grammatical preimage are rejected") {
  CHECK_THROWS_AS(demangle(SafeName{"k46_QQ"}, desk_atlas()), CodecError);
  CHECK_THROWS_AS(demangle(SafeName{"k45_X_"}, desk_atlas()), CodecError);
  CHECK_THROWS_AS(demangle(SafeName{"k46_XX_t!2_5!q21_q31!"}, desk_atlas()),
                  CodecError);  // odd '!' count cannot rebalance
  CHECK_THROWS_AS(demangle(SafeName{"46_XX"}, desk_atlas()), CodecError);  // missing k
  CHECK_THROWS_AS(demangle(SafeName{"k46 XX"}, desk_atlas()), CodecError);  // bad charset
}

TEST_CASE("mangling serialized random structures stays safe") {
  // fuzz-ish: serialize every corpus karyotype with multiplicities bumped
  for (const std::string& line : desk_corpus_lines()) {
    Karyotype k = testsupport::parse_or_fail(line);
    for (auto& event : k.events) event.multiplicity += 1;
    std::string serialized = serialize_karyotype(k);
    CHECK(is_safe_name(mangle(serialized).text));
  }
}
