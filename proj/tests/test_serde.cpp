#include <doctest.h>

#include "helpers.hpp"
#include "mc2/serde.hpp"

using namespace mc2;
using nlohmann::json;

TEST_CASE("trace schema uses the canonical field names") {
    auto t = make_trace("t1", {testutil::make_iter(1, Action::Accept, false, "9")}, 3, 12);
    json j = serde::trace_to_json(t);
    CHECK(j.at("instance id") == "t1");
    CHECK(j.at("terminal status") == "accepted");
    CHECK(j.at("final prediction") == "9");
    CHECK(j.at("token count") == 12);
    const auto& rec = j.at("history").at(0);
    CHECK(rec.at("iteration index") == 1);
    CHECK(rec.at("reasoner").contains("final answer"));
    CHECK(rec.at("reasoner").contains("full response text"));
    CHECK(rec.at("reasoner").contains("updated role policy"));
    CHECK(rec.at("monitor").at("error found flag") == false);
    CHECK(rec.at("monitor").at("error location") == "NONE");
    CHECK(rec.at("controller").at("action") == 1);
}

TEST_CASE("monitor error location serializes as an integer when present") {
    auto t = make_trace("t1", {testutil::make_iter(1, Action::Patch, true, "9", "10")}, 3, 0);
    json j = serde::trace_to_json(t);
    CHECK(j.at("history").at(0).at("monitor").at("error location") == 1);
}

TEST_CASE("500 randomized traces round-trip losslessly and byte-stably") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        Trace t = testutil::random_trace(rng, 3, "rt" + std::to_string(i));
        std::string first = serde::serialize_trace(t);
        Trace back = serde::deserialize_trace(first, 3);
        std::string second = serde::serialize_trace(back);
        REQUIRE(first == second);
        REQUIRE(serde::trace_to_json(t) == serde::trace_to_json(back));
        REQUIRE(back.instance_id == t.instance_id);
        REQUIRE(back.history.size() == t.history.size());
        REQUIRE(back.terminal_status == t.terminal_status);
        REQUIRE(back.final_prediction == t.final_prediction);
        REQUIRE(back.token_count == t.token_count);
    }
}

TEST_CASE("deserialization rejects tampered documents") {
    auto t = make_trace("t1",
                        {testutil::make_iter(1, Action::Restart, true, "a"),
                         testutil::make_iter(2, Action::Accept, false, "b")},
                        3, 5);
    json j = serde::trace_to_json(t);

    SUBCASE("status inconsistent with history") {
        j["terminal status"] = "corrected";
        CHECK_THROWS_AS(serde::trace_from_json(j, 3), ProtocolError);
    }
    SUBCASE("prediction inconsistent with history") {
        j["final prediction"] = "something else";
        CHECK_THROWS_AS(serde::trace_from_json(j, 3), ProtocolError);
    }
    SUBCASE("bad action code") {
        j["history"][1]["controller"]["action"] = 7;
        CHECK_THROWS_AS(serde::trace_from_json(j, 3), ProtocolError);
    }
    SUBCASE("error step without the flag") {
        j["history"][1]["monitor"]["error location"] = 2;  // flag is false there
        CHECK_THROWS_AS(serde::trace_from_json(j, 3), ProtocolError);
    }
    SUBCASE("failed policy update that still changed the prompt") {
        j["history"][0]["reasoner"]["updated role policy"]["succeeded"] = false;
        j["history"][0]["reasoner"]["updated role policy"]["prompt before"] = "x";
        j["history"][0]["reasoner"]["updated role policy"]["prompt after"] = "y";
        CHECK_THROWS_AS(serde::trace_from_json(j, 3), ProtocolError);
    }
    SUBCASE("history longer than the budget") {
        CHECK_THROWS_AS(serde::trace_from_json(j, 1), ProtocolError);
    }
}

TEST_CASE("lessons and meta-knowledge round-trip") {
    MicroLesson l;
    l.role = Role::Monitor;
    l.batch_index = 5;
    l.trigger = "t";
    l.action = "d";
    l.avoid = "a";
    l.tags = {"x", "y"};
    l.outcome_mix = {2, 1};
    l.source_instance_ids = {"i1", "i2"};
    l.embedding = std::vector<double>{0.5, -0.5};

    MicroLesson back = serde::lesson_from_json(serde::lesson_to_json(l));
    CHECK(back.role == l.role);
    CHECK(back.batch_index == 5);
    CHECK(back.trigger == "t");
    CHECK(back.tags == l.tags);
    CHECK(back.outcome_mix.successes == 2);
    CHECK(back.embedding == l.embedding);

    MicroLesson no_embed = l;
    no_embed.embedding = std::nullopt;
    CHECK(!serde::lesson_from_json(serde::lesson_to_json(no_embed)).embedding.has_value());

    MetaKnowledge k{Role::Controller, 7, "rules text", {5, 6, 7}};
    MetaKnowledge kb = serde::meta_from_json(serde::meta_to_json(k));
    CHECK(kb.role == Role::Controller);
    CHECK(kb.batch_index == 7);
    CHECK(kb.rules == "rules text");
    CHECK(kb.source_window == std::vector<int>{5, 6, 7});
}
