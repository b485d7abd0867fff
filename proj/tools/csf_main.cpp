// Command-line front end; talks to the solver library through its C API only.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "csf/csf.h"

namespace {

namespace fs = std::filesystem;

// Wildcard match supporting '*' and '?', applied to path components.
bool wildcard_match(const std::string &pattern, const std::string &text) {
    size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<fs::path> expand_glob(const std::string &pattern) {
    fs::path pat(pattern);
    fs::path dir = pat.parent_path();
    if (dir.empty()) dir = ".";
    std::string base = pat.filename().string();
    std::vector<fs::path> out;
    if (base.find('*') == std::string::npos && base.find('?') == std::string::npos) {
        if (fs::exists(pat)) out.push_back(pat);
        return out;
    }
    if (!fs::is_directory(dir)) return out;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && wildcard_match(base, entry.path().filename().string()))
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_run(const std::string &config, const std::string &out_dir) {
    int code = csf_run_experiment_file(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str());
    if (code != 0)
        std::fprintf(stderr, "csf run: %s exited with code %d\n", config.c_str(), code);
    return code;
}

int cmd_check(const std::string &config) {
    int code = csf_validate_config_file(config.c_str());
    std::printf("%s: %s\n", config.c_str(), code == 0 ? "ok" : "invalid");
    return code;
}

int cmd_sweep(const std::string &pattern, const std::string &out_dir, int jobs) {
    std::vector<fs::path> configs = expand_glob(pattern);
    if (configs.empty()) {
        std::fprintf(stderr, "csf sweep: no configs match %s\n", pattern.c_str());
        return 5;
    }
    std::vector<int> codes(configs.size(), 0);
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= configs.size()) return;
            fs::path run_out = fs::path(out_dir) / configs[i].stem();
            codes[i] = csf_run_experiment_file(configs[i].string().c_str(),
                                               run_out.string().c_str());
        }
    };
    int thread_count = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
    std::vector<std::thread> pool;
    for (int k = 0; k < thread_count; ++k) pool.emplace_back(worker);
    for (std::thread &th : pool) th.join();

    int worst = 0;
    for (size_t i = 0; i < configs.size(); ++i) {
        std::printf("%s: exit %d\n", configs[i].string().c_str(), codes[i]);
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"curve shortening flow simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, pattern;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    CLI::App *run = app.add_subcommand("run", "run one experiment");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the configuration)");

    CLI::App *check = app.add_subcommand("check", "validate a configuration without running");
    check->add_option("--config", config_path, "configuration file")->required();

    CLI::App *sweep = app.add_subcommand("sweep", "run every matching configuration");
    sweep->add_option("--configs", pattern, "glob of configuration files")->required();
    sweep->add_option("--out", out_dir, "output root; one subdirectory per run")->required();
    sweep->add_option("--jobs", jobs, "parallel runs");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (check->parsed()) return cmd_check(config_path);
    return cmd_sweep(pattern, out_dir, jobs);
}
