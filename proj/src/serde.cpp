#include "mc2/serde.hpp"

namespace mc2::serde {

using nlohmann::json;

namespace {

json policy_meta_to_json(const PolicyUpdateMeta& m) {
    return {{"attempted", m.attempted},
            {"succeeded", m.succeeded},
            {"updater model", m.updater_model},
            {"prompt before", m.prompt_before},
            {"prompt after", m.prompt_after}};
}

PolicyUpdateMeta policy_meta_from_json(const json& j) {
    PolicyUpdateMeta m;
    m.attempted = j.at("attempted").get<bool>();
    m.succeeded = j.at("succeeded").get<bool>();
    m.updater_model = j.at("updater model").get<std::string>();
    m.prompt_before = j.at("prompt before").get<std::string>();
    m.prompt_after = j.at("prompt after").get<std::string>();
    if (m.succeeded && !m.attempted) throw ProtocolError("policy update: succeeded without attempt");
    if (!m.succeeded && m.prompt_after != m.prompt_before)
        throw ProtocolError("policy update: failed update must leave the prompt unchanged");
    return m;
}

}  // namespace

json trace_to_json(const Trace& trace) {
    json history = json::array();
    for (const auto& it : trace.history) {
        json reasoner = {{"final answer", it.reasoner.final_answer},
                         {"full response text", it.reasoner.full_text},
                         {"updated role policy", policy_meta_to_json(it.reasoner.policy_update)}};
        json monitor = {
            {"error found flag", it.monitor.error_found},
            {"error location",
             it.monitor.error_step ? json(*it.monitor.error_step) : json("NONE")},
            {"error description", it.monitor.error_description},
            {"audit explanation", it.monitor.explanation},
            {"full report text", it.monitor.full_text},
            {"updated role policy", policy_meta_to_json(it.monitor.policy_update)}};
        json controller = {
            {"action", encode_action(it.controller.action)},
            {"justification", it.controller.justification},
            {"revision suggestions", it.controller.revision_suggestions},
            {"corrected reasoning", it.controller.corrected_reasoning},
            {"final answer", it.controller.final_answer},
            {"full decision text", it.controller.full_text},
            {"updated role policy", policy_meta_to_json(it.controller.policy_update)}};
        history.push_back({{"iteration index", it.index},
                           {"reasoner", reasoner},
                           {"monitor", monitor},
                           {"controller", controller}});
    }
    return {{"instance id", trace.instance_id},
            {"history", history},
            {"terminal status", terminal_status_name(trace.terminal_status)},
            {"final prediction", trace.final_prediction},
            {"token count", trace.token_count}};
}

Trace trace_from_json(const json& j, int max_iterations) {
    std::vector<IterationRecord> history;
    for (const auto& rec : j.at("history")) {
        IterationRecord it;
        it.index = rec.at("iteration index").get<int>();

        const auto& r = rec.at("reasoner");
        it.reasoner.final_answer = r.at("final answer").get<std::string>();
        it.reasoner.full_text = r.at("full response text").get<std::string>();
        it.reasoner.policy_update = policy_meta_from_json(r.at("updated role policy"));

        const auto& m = rec.at("monitor");
        it.monitor.error_found = m.at("error found flag").get<bool>();
        const auto& loc = m.at("error location");
        if (loc.is_number_integer()) it.monitor.error_step = loc.get<int>();
        if (!it.monitor.error_found && it.monitor.error_step)
            throw ProtocolError("monitor: error step without error flag");
        it.monitor.error_description = m.at("error description").get<std::string>();
        it.monitor.explanation = m.at("audit explanation").get<std::string>();
        it.monitor.full_text = m.at("full report text").get<std::string>();
        it.monitor.policy_update = policy_meta_from_json(m.at("updated role policy"));

        const auto& c = rec.at("controller");
        it.controller.action = decode_action(c.at("action").get<int>());
        it.controller.justification = c.at("justification").get<std::string>();
        it.controller.revision_suggestions = c.at("revision suggestions").get<std::string>();
        it.controller.corrected_reasoning = c.at("corrected reasoning").get<std::string>();
        it.controller.final_answer = c.at("final answer").get<std::string>();
        it.controller.full_text = c.at("full decision text").get<std::string>();
        it.controller.policy_update = policy_meta_from_json(c.at("updated role policy"));

        history.push_back(std::move(it));
    }

    Trace t = make_trace(j.at("instance id").get<std::string>(), std::move(history),
                         max_iterations, j.at("token count").get<std::int64_t>());
    if (t.terminal_status != terminal_status_from_name(j.at("terminal status").get<std::string>()))
        throw ProtocolError("trace: terminal status inconsistent with history");
    if (t.final_prediction != j.at("final prediction").get<std::string>())
        throw ProtocolError("trace: final prediction inconsistent with history");
    return t;
}

std::string serialize_trace(const Trace& trace) { return trace_to_json(trace).dump(2); }

Trace deserialize_trace(const std::string& text, int max_iterations) {
    return trace_from_json(json::parse(text), max_iterations);
}

json lesson_to_json(const MicroLesson& lesson) {
    json j = {{"role", role_name(lesson.role)},
              {"batch_index", lesson.batch_index},
              {"trigger", lesson.trigger},
              {"action", lesson.action},
              {"avoid", lesson.avoid},
              {"tags", lesson.tags},
              {"outcome_mix",
               {{"successes", lesson.outcome_mix.successes},
                {"failures", lesson.outcome_mix.failures}}},
              {"source_instance_ids", lesson.source_instance_ids}};
    if (lesson.embedding) j["embedding"] = *lesson.embedding;
    return j;
}

MicroLesson lesson_from_json(const json& j) {
    MicroLesson l;
    l.role = role_from_name(j.at("role").get<std::string>());
    l.batch_index = j.at("batch_index").get<int>();
    l.trigger = j.at("trigger").get<std::string>();
    l.action = j.at("action").get<std::string>();
    l.avoid = j.at("avoid").get<std::string>();
    l.tags = j.at("tags").get<std::vector<std::string>>();
    l.outcome_mix.successes = j.at("outcome_mix").at("successes").get<int>();
    l.outcome_mix.failures = j.at("outcome_mix").at("failures").get<int>();
    l.source_instance_ids = j.at("source_instance_ids").get<std::vector<std::string>>();
    if (j.contains("embedding")) l.embedding = j.at("embedding").get<std::vector<double>>();
    return l;
}

json meta_to_json(const MetaKnowledge& k) {
    return {{"role", role_name(k.role)},
            {"batch_index", k.batch_index},
            {"rules", k.rules},
            {"source_window", k.source_window}};
}

MetaKnowledge meta_from_json(const json& j) {
    MetaKnowledge k;
    k.role = role_from_name(j.at("role").get<std::string>());
    k.batch_index = j.at("batch_index").get<int>();
    k.rules = j.at("rules").get<std::string>();
    k.source_window = j.at("source_window").get<std::vector<int>>();
    return k;
}

json reflection_to_json(const Reflection& r) {
    json monitor = json::array();
    for (const auto& m : r.monitor_facts)
        monitor.push_back({{"error_found", m.error_found},
                           {"error_step", m.error_step ? json(*m.error_step) : json("NONE")},
                           {"description", m.description}});
    json controller = json::array();
    for (const auto& c : r.controller_facts)
        controller.push_back(
            {{"action", encode_action(c.action)}, {"justification", c.justification}});
    json j = {{"instance_id", r.instance_id},
              {"role", r.role},
              {"task_outcome", r.task_success ? "success" : "failure"},
              {"task_quality", task_quality_name(r.task_quality)},
              {"reasoner_quality", role_quality_name(r.reasoner_quality)},
              {"monitor_quality", role_quality_name(r.monitor_quality)},
              {"controller_quality", role_quality_name(r.controller_quality)},
              {"iteration_count", r.iteration_count},
              {"reasoner_answers", r.reasoner_answers},
              {"monitor_trajectory", monitor},
              {"controller_trajectory", controller}};
    if (r.excerpt) j["excerpt"] = *r.excerpt;
    return j;
}

}  // namespace mc2::serde
