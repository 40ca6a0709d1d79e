#include <doctest.h>

#include "helpers.hpp"
#include "mc2/consolidation.hpp"
#include "mc2/reflection.hpp"

using namespace mc2;
using namespace testutil;

namespace {

Reflection simple_reflection(const std::string& id, bool success) {
    Trace t = make_trace(id, {make_iter(1, Action::Accept, false, "7")}, 3, 1);
    return reflect(t, success);
}

PromptLibrary lib() { return PromptLibrary::defaults(); }

}  // namespace

TEST_CASE("empty selection distills nothing and makes no call") {
    ScriptedBackend b({"unused"});
    auto out = distill(Role::Reasoner, {}, 1, b, lib());
    CHECK(!out.has_value());
    CHECK(b.generation_calls() == 0);
}

TEST_CASE("distillation produces a lesson with provenance and an embedding") {
    ScriptedBackend b({distiller_resp()});
    auto out = distill(Role::Monitor, {simple_reflection("a", true), simple_reflection("c", false)},
                       4, b, lib());
    REQUIRE(out.has_value());
    CHECK(out->role == Role::Monitor);
    CHECK(out->batch_index == 4);
    CHECK(out->trigger == "multi-step arithmetic");
    CHECK(out->action == "verify each numbered step");
    CHECK(out->avoid == "skipping the final check");
    CHECK(out->tags == std::vector<std::string>{"math", "care"});
    CHECK(out->source_instance_ids == std::vector<std::string>{"a", "c"});
    CHECK(out->outcome_mix.successes == 1);
    CHECK(out->outcome_mix.failures == 1);
    REQUIRE(out->embedding.has_value());
    CHECK(b.generation_calls() == 1);
}

TEST_CASE("distillation regenerates once on unparsable output") {
    ScriptedBackend b({"rambling with no fields", distiller_resp()});
    auto out = distill(Role::Reasoner, {simple_reflection("a", true)}, 1, b, lib());
    REQUIRE(out.has_value());
    CHECK(b.generation_calls() == 2);
}

TEST_CASE("distillation gives up after two failures") {
    ScriptedBackend b({"junk one", "junk two", "never reached"});
    auto out = distill(Role::Reasoner, {simple_reflection("a", true)}, 1, b, lib());
    CHECK(!out.has_value());
    CHECK(b.generation_calls() == 2);
}

TEST_CASE("distiller input carries reflections but never the gold answer") {
    ScriptedBackend b({distiller_resp()});
    auto r = simple_reflection("inst-9", true);
    distill(Role::Reasoner, {r}, 1, b, lib());
    auto log = b.call_log();
    REQUIRE(log.size() == 1);
    CHECK(log[0].purpose == CallPurpose::Distiller);
    CHECK(log[0].prompt.find("inst-9") != std::string::npos);
}

TEST_CASE("consolidation merges windowed lessons into new rules") {
    ScriptedBackend b({consolidator_resp()});
    MicroLesson l1, l2;
    l1.role = l2.role = Role::Controller;
    l1.batch_index = 2;
    l2.batch_index = 3;
    l1.trigger = "t1";
    l1.action = "d1";
    l2.trigger = "t2";
    l2.action = "d2";
    MetaKnowledge prev{Role::Controller, 1, "old rules", {1}};

    auto k = consolidate(Role::Controller, prev, {l1, l2}, 3, b, lib());
    CHECK(k.role == Role::Controller);
    CHECK(k.batch_index == 3);
    CHECK(k.rules == "1. Number every step.\n2. Verify before accepting.");
    CHECK(k.source_window == std::vector<int>{2, 3});
    // Prompt includes the previous rules and both lessons.
    auto prompt = b.call_log()[0].prompt;
    CHECK(prompt.find("old rules") != std::string::npos);
    CHECK(prompt.find("t1") != std::string::npos);
    CHECK(prompt.find("d2") != std::string::npos);
}

TEST_CASE("consolidation retries once, then falls back to the identity update") {
    MetaKnowledge prev{Role::Reasoner, 1, "keep these", {1}};
    MicroLesson l;
    l.role = Role::Reasoner;
    l.batch_index = 2;
    l.trigger = "t";
    l.action = "d";

    SUBCASE("second attempt succeeds") {
        ScriptedBackend b({"nothing usable", consolidator_resp()});
        auto k = consolidate(Role::Reasoner, prev, {l}, 2, b, lib());
        CHECK(b.generation_calls() == 2);
        CHECK(k.rules != prev.rules);
    }
    SUBCASE("both attempts fail") {
        ScriptedBackend b({"nothing usable", "still nothing"});
        auto k = consolidate(Role::Reasoner, prev, {l}, 2, b, lib());
        CHECK(b.generation_calls() == 2);
        CHECK(k.rules == "keep these");  // identity update
        CHECK(k.batch_index == 2);
    }
    SUBCASE("dead backend is also the identity update") {
        ScriptedBackend b({"only one"});
        b.fast_forward(1);
        auto k = consolidate(Role::Reasoner, prev, {l}, 2, b, lib());
        CHECK(k.rules == "keep these");
    }
}

TEST_CASE("a dead backend skips distillation without raising") {
    ScriptedBackend b({"only one"});
    b.fast_forward(1);
    auto out = distill(Role::Reasoner, {simple_reflection("a", true)}, 1, b, lib());
    CHECK(!out.has_value());
}
