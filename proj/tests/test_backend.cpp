#include <doctest.h>

#include <cmath>

#include "mc2/backend.hpp"

using namespace mc2;

TEST_CASE("scripted backend replays responses in order and then fails strictly") {
    ScriptedBackend b({"one", "two words"});
    CHECK(b.generate({"p", CallPurpose::Other, ""}).text == "one");
    auto r = b.generate({"p", CallPurpose::Other, ""});
    CHECK(r.text == "two words");
    CHECK(r.completion_tokens == 2);
    CHECK_THROWS_AS(b.generate({"p", CallPurpose::Other, ""}), BackendError);
}

TEST_CASE("scripted backend loop mode wraps around") {
    ScriptedBackend b({"a", "b"}, {}, 0, 8, /*loop=*/true);
    for (int i = 0; i < 5; ++i) CHECK_NOTHROW(b.generate({"p", CallPurpose::Other, ""}));
    CHECK(b.generate({"p", CallPurpose::Other, ""}).text == "b");
}

TEST_CASE("empty prompt is a configuration error") {
    ScriptedBackend b({"x"});
    CHECK_THROWS_AS(b.generate({"", CallPurpose::Other, ""}), ConfigError);
    CHECK_THROWS_AS(b.embed(""), ConfigError);
}

TEST_CASE("generation calls are audit-logged with purpose and instance") {
    ScriptedBackend b({"x", "y"});
    b.generate({"prompt-1", CallPurpose::Reasoner, "i1"});
    b.generate({"prompt-2", CallPurpose::Distiller, ""});
    auto log = b.call_log();
    REQUIRE(log.size() == 2);
    CHECK(log[0].purpose == CallPurpose::Reasoner);
    CHECK(log[0].instance_id == "i1");
    CHECK(log[0].prompt == "prompt-1");
    CHECK(log[1].purpose == CallPurpose::Distiller);
    CHECK(b.generation_calls() == 2);
}

TEST_CASE("embedding table lookups win over hashing") {
    ScriptedBackend b({"x"}, {{"known", {3.0, 4.0}}}, 0, 2);
    auto v = b.embed("known");
    CHECK(v.values == std::vector<double>{3.0, 4.0});
}

TEST_CASE("hashed embeddings are deterministic seeded unit vectors") {
    auto a1 = hashed_unit_vector("some text", 42, 16);
    auto a2 = hashed_unit_vector("some text", 42, 16);
    auto b = hashed_unit_vector("some text", 43, 16);
    auto c = hashed_unit_vector("other text", 42, 16);
    CHECK(a1 == a2);
    CHECK(a1 != b);
    CHECK(a1 != c);
    double norm2 = 0;
    for (double x : a1) norm2 += x * x;
    CHECK(std::abs(norm2 - 1.0) < 1e-12);
}

TEST_CASE("embedding dimension is pinned for the lifetime of a run") {
    ScriptedBackend b({"x"}, {{"two", {1.0, 0.0}}, {"three", {1.0, 0.0, 0.0}}}, 0, 2);
    b.embed("two");
    CHECK_THROWS_AS(b.embed("three"), ProtocolError);
    // cached entry still served
    CHECK(b.embed("two").dims() == 2);
}

TEST_CASE("fast_forward consumes script without logging") {
    ScriptedBackend b({"a", "b", "c"});
    b.fast_forward(2);
    CHECK(b.generation_calls() == 0);
    CHECK(b.generate({"p", CallPurpose::Other, ""}).text == "c");
    CHECK_THROWS_AS(b.fast_forward(5), BackendError);
}
