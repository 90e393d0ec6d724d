#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace patronnet {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitBadInput = 2;

enum class OutputFormat { Json, Text };

struct IngestOptions {
    std::filesystem::path households;
    std::filesystem::path links;
    std::optional<std::filesystem::path> members;
    std::optional<std::filesystem::path> taxonomy;
    std::filesystem::path out_dir;
    std::size_t max_rejects = 0;
};

struct AnalyzeOptions {
    std::filesystem::path households;
    std::filesystem::path links;
    std::optional<std::filesystem::path> members;
    std::optional<std::filesystem::path> taxonomy;
    std::optional<std::filesystem::path> states;
    std::string threshold = "0.05";
    std::filesystem::path out_dir;
    std::size_t max_rejects = 0;
};

struct SampleOptions {
    std::optional<std::filesystem::path> strata;  // defaults to the builtin 13-stratum design
    std::filesystem::path blocks;
    std::filesystem::path villages;
    std::uint64_t seed = 0;
    double response_rate = 1.0;
    std::vector<std::string> excluded_villages;
    std::filesystem::path out_dir;
};

struct SynthOptions {
    std::string village_id = "SYN01";
    int n_households = 100;
    int n_hubs = 2;
    int dependents_per_hub = 10;
    double reciprocal_rate = 0.0;
    double noise_rate = 0.0;
    double crucial_fraction = 1.0;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir;
};

struct ReportOptions {
    std::filesystem::path households;
    std::filesystem::path links;
    std::optional<std::filesystem::path> members;
    std::optional<std::filesystem::path> taxonomy;
    std::optional<std::filesystem::path> elite_services;
    std::optional<std::filesystem::path> states;
    std::string threshold = "0.05";
    OutputFormat format = OutputFormat::Json;
    std::filesystem::path out_dir;
    std::size_t max_rejects = 0;
};

struct ExportOptions {
    std::filesystem::path households;
    std::filesystem::path links;
    std::optional<std::filesystem::path> taxonomy;
    std::optional<std::string> village;  // default: every village
    std::string threshold = "0.05";
    std::filesystem::path out_dir;
    std::size_t max_rejects = 0;
};

int cmd_ingest(const IngestOptions& options);
int cmd_analyze(const AnalyzeOptions& options);
int cmd_sample(const SampleOptions& options);
int cmd_synth(const SynthOptions& options);
int cmd_report(const ReportOptions& options);
int cmd_export(const ExportOptions& options);

}  // namespace patronnet
