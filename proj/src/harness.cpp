#include "mc2/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mc2/consolidation.hpp"
#include "mc2/mro.hpp"
#include "mc2/policy.hpp"
#include "mc2/reflection.hpp"
#include "mc2/scoring.hpp"
#include "mc2/serde.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mc2 {

BatchPlan plan_batches(int dataset_size) {
    if (dataset_size < 1) throw ConfigError("dataset size must be >= 1");
    BatchPlan p;
    p.dataset_size = dataset_size;
    p.batch_size = std::min(100, std::max(10, dataset_size / 10));
    p.num_batches = (dataset_size + p.batch_size - 1) / p.batch_size;
    return p;
}

std::vector<Instance> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open dataset: " + path);

    std::vector<Instance> out;
    std::set<std::string> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw LoadError("line " + std::to_string(line_no) + ": malformed record: " + e.what());
        }
        Instance inst;
        try {
            inst.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
            inst.question = j.at("question").get<std::string>();
            inst.gold_answer =
                j.at("answer").is_string() ? j.at("answer").get<std::string>() : j.at("answer").dump();
            if (j.contains("metadata"))
                for (const auto& [k, v] : j.at("metadata").items())
                    inst.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
        } catch (const json::exception& e) {
            throw LoadError("line " + std::to_string(line_no) + ": missing field: " + e.what());
        }
        if (inst.question.empty())
            throw LoadError("line " + std::to_string(line_no) + ": empty question");
        if (!ids.insert(inst.id).second)
            throw LoadError("line " + std::to_string(line_no) + ": duplicate id '" + inst.id + "'");
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<Instance> shuffle_instances(std::vector<Instance> instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::shuffle(instances.begin(), instances.end(), rng);
    return instances;
}

json RunReport::to_json() const {
    json per_batch = json::array();
    for (const auto& b : batches)
        per_batch.push_back({{"batch", b.batch_index},
                             {"size", b.size},
                             {"correct", b.correct},
                             {"accuracy", b.accuracy()},
                             {"s_plus", b.s_plus},
                             {"s_minus", b.s_minus}});
    json per_iter = json::object();
    for (const auto& [k, v] : per_iteration)
        per_iter[std::to_string(k)] = {{"n", v.first},
                                       {"correct", v.second},
                                       {"accuracy", v.first ? double(v.second) / v.first : 0.0}};
    json grade = json::object();
    for (const auto& [g, v] : grades)
        grade[std::string(1, g)] = {{"n", v.first},
                                    {"correct", v.second},
                                    {"accuracy", v.first ? double(v.second) / v.first : 0.0}};
    json retrievals = json::object();
    for (const auto& [k, v] : retrievals_per_batch) retrievals[std::to_string(k)] = v;
    json j = {{"per_batch", per_batch},
              {"retrievals_per_batch", retrievals},
              {"per_iteration", per_iter},
              {"restart_ratio", restart_ratio},
              {"mean_tokens", mean_tokens},
              {"grades", grade},
              {"total", total},
              {"total_correct", total_correct},
              {"overall_accuracy", overall_accuracy()},
              {"infra_failed", infra_failed}};
    if (quality_correctness_rho) j["quality_correctness_rho"] = *quality_correctness_rho;
    return j;
}

json RunState::to_json() const {
    json lessons_j = json::array();
    for (const auto& l : lessons) lessons_j.push_back(serde::lesson_to_json(l));
    json meta_j = json::array();
    for (const auto& k : knowledge) meta_j.push_back(serde::meta_to_json(k));
    return {{"last_batch", last_batch}, {"lessons", lessons_j}, {"meta_knowledge", meta_j}};
}

RunState RunState::from_json(const json& j) {
    RunState s;
    s.last_batch = j.at("last_batch").get<int>();
    for (const auto& l : j.at("lessons")) s.lessons.push_back(serde::lesson_from_json(l));
    for (const auto& k : j.at("meta_knowledge")) s.knowledge.push_back(serde::meta_from_json(k));
    return s;
}

namespace {

struct InstanceResult {
    Instance instance;
    int batch_index = 0;
    bool infra_failed = false;
    bool correct = false;
    std::optional<Trace> trace;
    std::optional<Reflection> reflection;
    std::vector<IterationRecord> partial;
    std::string failure_reason;
};

struct Checkpoint {
    RunState state;
    std::size_t generation_calls = 0;
    json results = json::array();       // summaries of scored instances so far
    json batch_extras = json::array();  // per-batch filter sets and retrieval counts
};

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << text;
}

MetaKnowledge& knowledge_for(std::vector<MetaKnowledge>& ks, Role role) {
    for (auto& k : ks)
        if (k.role == role) return k;
    ks.push_back(MetaKnowledge{role, 0, "", {}});
    return ks.back();
}

json result_summary(const InstanceResult& r) {
    json j = {{"id", r.instance.id},
              {"batch", r.batch_index},
              {"correct", r.correct},
              {"infra_failed", r.infra_failed}};
    if (r.trace) {
        j["iterations"] = static_cast<int>(r.trace->history.size());
        j["terminal_status"] = terminal_status_name(r.trace->terminal_status);
        j["tokens"] = r.trace->token_count;
        int restarts = 0;
        for (const auto& it : r.trace->history)
            if (it.controller.action == Action::Restart) ++restarts;
        j["restart_actions"] = restarts;
        j["actions"] = static_cast<int>(r.trace->history.size());
    }
    if (r.reflection)
        j["task_quality"] = task_quality_name(r.reflection->task_quality);
    return j;
}

// Reconstructs report inputs from checkpointed summaries (resumed batches).
struct Tally {
    std::map<int, BatchStats> batches;
    std::map<int, int> retrievals_per_batch;
    std::map<int, std::pair<int, int>> per_iteration;
    long long restart_actions = 0;
    long long total_actions = 0;
    long long total_tokens = 0;
    std::map<char, std::pair<int, int>> grades;
    std::vector<TaskQuality> grade_seq;
    std::vector<bool> correct_seq;
    int total = 0;
    int total_correct = 0;
    int infra_failed = 0;

    void add_summary(const json& s) {
        int b = s.at("batch").get<int>();
        auto& bs = batches[b];
        bs.batch_index = b;
        bs.size += 1;
        bool correct = s.at("correct").get<bool>();
        if (correct) {
            bs.correct += 1;
            total_correct += 1;
        }
        total += 1;
        if (s.at("infra_failed").get<bool>()) {
            infra_failed += 1;
            return;
        }
        int iters = s.at("iterations").get<int>();
        auto& pi = per_iteration[iters];
        pi.first += 1;
        if (correct) pi.second += 1;
        restart_actions += s.at("restart_actions").get<int>();
        total_actions += s.at("actions").get<int>();
        total_tokens += s.at("tokens").get<std::int64_t>();
        if (s.contains("task_quality")) {
            char g = s.at("task_quality").get<std::string>()[0];
            auto& gs = grades[g];
            gs.first += 1;
            if (correct) gs.second += 1;
            grade_seq.push_back(g == 'A' ? TaskQuality::A : g == 'B' ? TaskQuality::B
                                                                     : TaskQuality::C);
            correct_seq.push_back(correct);
        }
    }
};

}  // namespace

RunReport run(const RunConfig& config, const std::vector<Instance>& dataset, Backend& backend,
              const PromptLibrary& prompts, std::optional<int> stop_after_batch) {
    if (dataset.empty()) throw ConfigError("empty dataset");
    if (config.max_iterations < 1 || config.window < 1 || config.top_k < 1 ||
        config.workers < 1)
        throw ConfigError("invalid run configuration");

    {
        std::set<std::string> ids;
        for (const auto& inst : dataset)
            if (!ids.insert(inst.id).second)
                throw ConfigError("duplicate instance id '" + inst.id + "'");
    }

    std::vector<Instance> ordered = dataset;
    if (config.shuffle) ordered = shuffle_instances(std::move(ordered), config.seed);

    int batch_size = config.batch_size_override ? *config.batch_size_override
                                                : plan_batches((int)ordered.size()).batch_size;
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
    int num_batches = (static_cast<int>(ordered.size()) + batch_size - 1) / batch_size;

    fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);

    LessonBuffer buffer(config.window);
    std::vector<MetaKnowledge> knowledge;
    int batch_offset = 0;  // global index of the batch before the first local one
    Tally tally;
    Checkpoint ckpt;
    int resume_from_local = 1;

    if (config.warm_start_snapshot) {
        std::ifstream in(*config.warm_start_snapshot);
        if (!in) throw LoadError("cannot open snapshot: " + *config.warm_start_snapshot);
        batch_offset = RunState::from_json(json::parse(in)).last_batch;
        // Lessons and knowledge are loaded below, from the checkpoint when
        // resuming or from the snapshot itself otherwise.
    }

    bool resumed = false;
    if (config.resume) {
        fs::path cp = out_dir / "checkpoint.json";
        if (fs::exists(cp)) {
            std::ifstream in(cp);
            json j = json::parse(in);
            RunState s = RunState::from_json(j.at("state"));
            for (const auto& l : s.lessons) buffer.add(l);
            knowledge = s.knowledge;
            ckpt.generation_calls = j.at("generation_calls").get<std::size_t>();
            ckpt.results = j.at("results");
            for (const auto& r : ckpt.results) tally.add_summary(r);
            ckpt.batch_extras = j.at("batch_extras");
            for (const auto& e : ckpt.batch_extras) {
                int eb = e.at("batch").get<int>();
                auto& bs = tally.batches[eb];
                bs.batch_index = eb;
                bs.s_plus = e.at("s_plus").get<std::vector<std::string>>();
                bs.s_minus = e.at("s_minus").get<std::vector<std::string>>();
                tally.retrievals_per_batch[eb] = e.at("retrievals").get<int>();
            }
            resume_from_local = s.last_batch - batch_offset + 1;
            if (auto* scripted = dynamic_cast<ScriptedBackend*>(&backend))
                scripted->fast_forward(ckpt.generation_calls);
            resumed = true;
        }
    }
    if (config.warm_start_snapshot && !resumed) {
        std::ifstream in(*config.warm_start_snapshot);
        RunState s = RunState::from_json(json::parse(in));
        for (const auto& l : s.lessons) buffer.add(l);
        knowledge = s.knowledge;
    }

    RolePromptSet base = prompts.base_prompts();
    std::atomic<std::uint64_t> version{1};

    for (int local_b = resume_from_local; local_b <= num_batches; ++local_b) {
        const int b = batch_offset + local_b;  // global batch index
        std::size_t begin = static_cast<std::size_t>(local_b - 1) * batch_size;
        std::size_t end = std::min(ordered.size(), begin + batch_size);
        std::vector<InstanceResult> results(end - begin);
        std::atomic<int> retrievals_this_batch{0};

        auto process = [&](std::size_t offset) {
            const Instance& inst = ordered[begin + offset];
            InstanceResult& res = results[offset];
            res.instance = inst;
            res.batch_index = b;

            RolePromptSet prompt_set = base;
            std::int64_t composer_tokens = 0;
            if (b >= 2) {
                // Retrieval + per-role compilation against frozen (K, window).
                for (Role role : kAllRoles) {
                    auto lessons = retrieve_for_instance(inst, backend, buffer, role, b,
                                                         config.top_k);
                    retrievals_this_batch.fetch_add(1);
                    MetaKnowledge k;
                    for (const auto& existing : knowledge)
                        if (existing.role == role) k = existing;
                    CompiledPrompt cp =
                        compile_prompt(role, base.for_role(role), k, lessons, inst, backend,
                                       prompts, config.prompt_context_budget, &composer_tokens);
                    prompt_set.for_role(role) = cp.text;
                    if (cp.meta.succeeded) {
                        prompt_set.version = version.fetch_add(1);
                        prompt_set.provenance = {true, b, inst.id, base.version};
                    }
                }
            }

            LoopOutcome outcome =
                run_inner_loop(inst, prompt_set, config.max_iterations, backend, composer_tokens);
            if (outcome.infra_failed) {
                res.infra_failed = true;
                res.failure_reason = outcome.failure_reason;
                res.partial = std::move(outcome.partial);
                res.correct = false;  // conservative default
                return;
            }
            res.trace = std::move(outcome.trace);
            res.correct = normalize_and_score(res.trace->final_prediction, inst.gold_answer);
            res.reflection = reflect(*res.trace, res.correct);
        };

        if (config.workers == 1) {
            for (std::size_t i = 0; i < results.size(); ++i) process(i);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            int width = std::min<int>(config.workers, static_cast<int>(results.size()));
            for (int t = 0; t < width; ++t)
                pool.emplace_back([&] {
                    for (std::size_t i = next.fetch_add(1); i < results.size();
                         i = next.fetch_add(1))
                        process(i);
                });
            for (auto& t : pool) t.join();
        }

        // ── batch boundary: all loops complete before any consolidation ──
        std::vector<Trace> traces;
        std::map<std::string, Reflection> reflections;
        for (const auto& r : results) {
            if (r.infra_failed) continue;  // excluded from consolidation inputs
            traces.push_back(*r.trace);
            reflections[r.instance.id] = *r.reflection;
        }
        BatchFilter filter = filter_batch(traces, config.max_iterations);

        std::vector<Reflection> selected;
        for (const auto& id : filter.s_plus) selected.push_back(reflections.at(id));
        for (const auto& id : filter.s_minus) selected.push_back(reflections.at(id));

        for (Role role : kAllRoles) {
            auto lesson = distill(role, selected, b, backend, prompts);
            if (lesson) {
                buffer.add(*lesson);
                fs::create_directories(out_dir / "lessons");
                std::ofstream log(out_dir / "lessons" / (std::string(role_name(role)) + ".jsonl"),
                                  std::ios::app);
                log << serde::lesson_to_json(*lesson).dump() << "\n";
            }
            auto windowed = buffer.window(role, b);
            if (!windowed.empty()) {
                MetaKnowledge& k = knowledge_for(knowledge, role);
                k = consolidate(role, k, windowed, b, backend, prompts);
                write_file(out_dir / "meta" /
                               (std::string(role_name(role)) + "_batch_" + std::to_string(b) +
                                ".json"),
                           serde::meta_to_json(k).dump(2));
            }
        }

        // Persist per-instance artifacts and accumulate report inputs.
        for (const auto& r : results) {
            if (r.trace)
                write_file(out_dir / "traces" / (r.instance.id + ".json"),
                           serde::serialize_trace(*r.trace));
            else {
                json doc = {{"instance id", r.instance.id},
                            {"infrastructure failure", r.failure_reason},
                            {"complete iterations", static_cast<int>(r.partial.size())}};
                write_file(out_dir / "traces" / (r.instance.id + ".partial.json"), doc.dump(2));
            }
            if (r.reflection)
                write_file(out_dir / "reflections" / (r.instance.id + ".json"),
                           serde::reflection_to_json(*r.reflection).dump(2));
            json summary = result_summary(r);
            ckpt.results.push_back(summary);
            tally.add_summary(summary);
        }
        auto& bs = tally.batches[b];
        bs.s_plus = filter.s_plus;
        bs.s_minus = filter.s_minus;
        tally.retrievals_per_batch[b] = retrievals_this_batch.load();

        // Checkpoint + snapshot: the run is resumable at this boundary.
        ckpt.state.last_batch = b;
        ckpt.state.lessons.clear();
        for (Role role : kAllRoles)
            for (const auto& l : buffer.all(role)) ckpt.state.lessons.push_back(l);
        ckpt.state.knowledge = knowledge;
        ckpt.generation_calls = backend.generation_calls();
        ckpt.batch_extras.push_back({{"batch", b},
                                     {"s_plus", filter.s_plus},
                                     {"s_minus", filter.s_minus},
                                     {"retrievals", retrievals_this_batch.load()}});
        write_file(out_dir / "snapshot.json", ckpt.state.to_json().dump(2));
        write_file(out_dir / "checkpoint.json",
                   json{{"state", ckpt.state.to_json()},
                        {"generation_calls", ckpt.generation_calls},
                        {"results", ckpt.results},
                        {"batch_extras", ckpt.batch_extras}}
                       .dump(2));

        if (stop_after_batch && local_b >= *stop_after_batch) break;
    }

    RunReport report;
    for (auto& [idx, bs] : tally.batches) report.batches.push_back(bs);
    report.retrievals_per_batch = tally.retrievals_per_batch;
    report.per_iteration = tally.per_iteration;
    report.restart_ratio = tally.total_actions
                               ? static_cast<double>(tally.restart_actions) / tally.total_actions
                               : 0.0;
    report.mean_tokens =
        tally.total ? static_cast<double>(tally.total_tokens) / tally.total : 0.0;
    report.grades = tally.grades;
    report.quality_correctness_rho = rank_correlation(tally.grade_seq, tally.correct_seq);
    report.total = tally.total;
    report.total_correct = tally.total_correct;
    report.infra_failed = tally.infra_failed;

    write_file(out_dir / "report.json", report.to_json().dump(2));
    return report;
}

}  // namespace mc2
