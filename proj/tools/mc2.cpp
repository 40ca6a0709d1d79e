#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mc2/backend.hpp"
#include "mc2/harness.hpp"
#include "mc2/prompts.hpp"

using nlohmann::json;

namespace {

void apply_config_file(const std::string& path, mc2::RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw mc2::ConfigError("cannot open config file: " + path);
    json j = json::parse(in);
    if (j.contains("max_iterations")) cfg.max_iterations = j["max_iterations"];
    if (j.contains("window")) cfg.window = j["window"];
    if (j.contains("top_k")) cfg.top_k = j["top_k"];
    if (j.contains("seed")) cfg.seed = j["seed"];
    if (j.contains("shuffle")) cfg.shuffle = j["shuffle"];
    if (j.contains("batch_size")) cfg.batch_size_override = j["batch_size"].get<int>();
    if (j.contains("workers")) cfg.workers = j["workers"];
    if (j.contains("endpoint_url")) cfg.backend.endpoint_url = j["endpoint_url"];
    if (j.contains("model_id")) cfg.backend.model_id = j["model_id"];
    if (j.contains("embedding_model_id")) cfg.backend.embedding_model_id = j["embedding_model_id"];
    if (j.contains("api_key_env_var")) cfg.backend.api_key_env_var = j["api_key_env_var"];
    if (j.contains("request_timeout_seconds"))
        cfg.backend.request_timeout_seconds = j["request_timeout_seconds"];
    if (j.contains("max_retries")) cfg.backend.max_retries = j["max_retries"];
}

std::unique_ptr<mc2::Backend> make_scripted(const std::string& path, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw mc2::ConfigError("cannot open script file: " + path);
    json j = json::parse(in);
    std::map<std::string, std::vector<double>> table;
    if (j.contains("embeddings"))
        for (const auto& [k, v] : j["embeddings"].items())
            table[k] = v.get<std::vector<double>>();
    return std::make_unique<mc2::ScriptedBackend>(
        j.at("script").get<std::vector<std::string>>(), table, seed,
        j.value("dims", std::size_t{8}), j.value("loop", false));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MC2 test-time-evolvement pipeline"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run the pipeline over a dataset");

    std::string dataset_path, config_file, script_file;
    mc2::RunConfig cfg;
    run_cmd->add_option("--dataset", dataset_path, "JSONL dataset path")->required();
    run_cmd->add_option("--config", config_file, "JSON run-config file");
    run_cmd->add_option("--endpoint", cfg.backend.endpoint_url, "Chat-completions endpoint URL");
    run_cmd->add_option("--model", cfg.backend.model_id, "Generation model id");
    run_cmd->add_option("--embedding-model", cfg.backend.embedding_model_id,
                        "Embedding model id");
    run_cmd->add_option("--api-key-env", cfg.backend.api_key_env_var,
                        "Env var holding the API key");
    run_cmd->add_option("--timeout", cfg.backend.request_timeout_seconds,
                        "Request timeout (seconds)");
    run_cmd->add_option("--retries", cfg.backend.max_retries, "Max transport retries");
    run_cmd->add_option("--max-iterations,-N", cfg.max_iterations, "Inner-loop budget");
    run_cmd->add_option("--window,-w", cfg.window, "Consolidation window (batches)");
    run_cmd->add_option("--top-k,-k", cfg.top_k, "Lessons retrieved per role");
    run_cmd->add_option("--seed", cfg.seed, "Run seed");
    run_cmd->add_flag("--shuffle", cfg.shuffle, "Shuffle instance order");
    int batch_size = 0;
    run_cmd->add_option("--batch-size", batch_size, "Override the batch-size formula");
    std::string warm_start;
    run_cmd->add_option("--warm-start", warm_start, "Snapshot file to initialize from");
    run_cmd->add_option("--workers", cfg.workers, "Worker-pool width within a batch");
    run_cmd->add_option("--out", cfg.output_dir, "Run output directory");
    run_cmd->add_flag("--resume", cfg.resume, "Resume from the output dir's checkpoint");
    run_cmd->add_option("--prompt-dir", cfg.prompt_dir, "Prompt template override directory");
    run_cmd->add_option("--scripted", script_file,
                        "Scripted backend replay file (offline runs)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) apply_config_file(config_file, cfg);
        if (batch_size > 0) cfg.batch_size_override = batch_size;
        if (!warm_start.empty()) cfg.warm_start_snapshot = warm_start;

        auto dataset = mc2::load_dataset(dataset_path);
        auto prompts = mc2::PromptLibrary::load(cfg.prompt_dir);

        std::unique_ptr<mc2::Backend> backend;
        if (!script_file.empty())
            backend = make_scripted(script_file, cfg.seed);
        else
            backend = std::make_unique<mc2::HttpBackend>(cfg.backend);

        mc2::RunReport report = mc2::run(cfg, dataset, *backend, prompts);
        std::cout << report.to_json().dump(2) << std::endl;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
