#include "patronnet/commands.hpp"

#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <span>

#include "json.hpp"
#include "patronnet/csv.hpp"
#include "patronnet/dependence.hpp"
#include "patronnet/dot.hpp"
#include "patronnet/ingest.hpp"
#include "patronnet/sampling.hpp"
#include "patronnet/stats.hpp"
#include "patronnet/synth.hpp"
#include "patronnet/util.hpp"

namespace patronnet {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Collects input digests and output names for the per-run manifest.
class RunManifest {
public:
    RunManifest(std::string subcommand, fs::path out_dir)
        : subcommand_(std::move(subcommand)), out_dir_(std::move(out_dir)) {
        fs::create_directories(out_dir_);
    }

    void note_input(const fs::path& path) {
        inputs_.push_back({{"file", path.filename().string()},
                           {"sha256", sha256_hex(read_file_text(path))}});
    }

    void set_parameters(json params) { parameters_ = std::move(params); }

    void write_output(const std::string& name, const std::string& content) {
        write_file_atomic(out_dir_ / name, content);
        outputs_.push_back(name);
    }

    void finish() {
        json manifest{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"subcommand", subcommand_},
                      {"parameters", parameters_},
                      {"inputs", inputs_},
                      {"outputs", outputs_}};
        write_file_atomic(out_dir_ / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    std::string subcommand_;
    fs::path out_dir_;
    json parameters_ = json::object();
    json inputs_ = json::array();
    json outputs_ = json::array();
};

ServiceTaxonomy load_taxonomy(const std::optional<fs::path>& path, RunManifest& manifest) {
    if (path) {
        manifest.note_input(*path);
        return ServiceTaxonomy::load(*path);
    }
    return ServiceTaxonomy::builtin();
}

std::string safe_name(const std::string& id) {
    std::string out;
    for (char c : id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const csv::SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const UnknownServiceKind& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const ReferentialError& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const InfeasibleSelection& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const ZeroSize& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const InfeasibleAssignment& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const NoEligibleVillage& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const ConfigInfeasible& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const InsufficientData& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitBadInput;
}

struct IngestedRun {
    ServiceTaxonomy taxonomy;
    IngestResult ingest;
};

IngestedRun ingest_for(const fs::path& households, const fs::path& links,
                       const std::optional<fs::path>& members,
                       const std::optional<fs::path>& taxonomy_path, RunManifest& manifest) {
    ServiceTaxonomy taxonomy = load_taxonomy(taxonomy_path, manifest);
    manifest.note_input(households);
    manifest.note_input(links);
    if (members) manifest.note_input(*members);
    IngestResult ingest = ingest_survey(households, links, taxonomy, members);
    return IngestedRun{std::move(taxonomy), std::move(ingest)};
}

int reject_gate(const ValidationReport& report, std::size_t max_rejects) {
    if (report.rejects.size() > max_rejects) {
        std::cerr << "validation failed: " << report.rejects.size()
                  << " rejected rows (tolerance " << max_rejects << ")\n";
        return kExitBadInput;
    }
    return kExitOk;
}

}  // namespace

int cmd_ingest(const IngestOptions& options) {
    return run_guarded([&] {
        RunManifest manifest("ingest", options.out_dir);
        auto run = ingest_for(options.households, options.links, options.members,
                              options.taxonomy, manifest);
        manifest.set_parameters({{"max_rejects", options.max_rejects}});

        std::span<const VillageDataset> villages(run.ingest.villages);
        manifest.write_output("households.csv", households_csv(villages));
        manifest.write_output("links.csv", links_csv(villages));
        manifest.write_output("members.csv", members_csv(villages));
        manifest.write_output("validation_report.txt", run.ingest.report.to_text());
        manifest.finish();
        return reject_gate(run.ingest.report, options.max_rejects);
    });
}

int cmd_analyze(const AnalyzeOptions& options) {
    return run_guarded([&] {
        Threshold threshold = Threshold::parse(options.threshold);
        RunManifest manifest("analyze", options.out_dir);
        auto run = ingest_for(options.households, options.links, options.members,
                              options.taxonomy, manifest);
        std::map<std::string, std::string> states;
        if (options.states) {
            manifest.note_input(*options.states);
            states = load_village_states_csv(*options.states);
        }
        manifest.set_parameters(
            {{"threshold", threshold.value()}, {"max_rejects", options.max_rejects}});

        std::vector<VillageClassification> classifications;
        for (const auto& dataset : run.ingest.villages) {
            VillageAnalysis analysis = analyze_village(dataset, run.taxonomy, threshold);
            manifest.write_output("classification_" + safe_name(dataset.village_id) + ".json",
                                  classification_json(analysis.classification).dump(2) + "\n");
            classifications.push_back(std::move(analysis.classification));
        }
        VillageSummary summary = village_summary(classifications, states);
        manifest.write_output("summary.json", village_summary_json(summary).dump(2) + "\n");
        manifest.write_output("validation_report.txt", run.ingest.report.to_text());
        manifest.finish();
        return reject_gate(run.ingest.report, options.max_rejects);
    });
}

int cmd_sample(const SampleOptions& options) {
    return run_guarded([&] {
        RunManifest manifest("sample", options.out_dir);
        std::vector<Stratum> strata;
        if (options.strata) {
            manifest.note_input(*options.strata);
            strata = load_strata_csv(*options.strata);
        } else {
            strata = default_strata();
        }
        manifest.note_input(options.blocks);
        manifest.note_input(options.villages);
        std::vector<BlockFrame> frames = load_frames_csv(options.blocks, options.villages);

        SampleRunConfig config;
        config.seed = options.seed;
        config.response_rate = options.response_rate;
        config.excluded_villages.insert(options.excluded_villages.begin(),
                                        options.excluded_villages.end());
        manifest.set_parameters({{"seed", options.seed},
                                 {"response_rate", options.response_rate},
                                 {"excluded_villages", options.excluded_villages}});

        SelectionTrace trace = run_sample_design(strata, frames, config);
        manifest.write_output("trace.json", trace_json(trace).dump(2) + "\n");
        manifest.finish();
        return kExitOk;
    });
}

int cmd_synth(const SynthOptions& options) {
    return run_guarded([&] {
        RunManifest manifest("synth", options.out_dir);
        SynthConfig config;
        config.village_id = options.village_id;
        config.n_households = options.n_households;
        config.n_hubs = options.n_hubs;
        config.dependents_per_hub = options.dependents_per_hub;
        config.reciprocal_pair_rate = options.reciprocal_rate;
        config.noise_link_rate = options.noise_rate;
        config.crucial_fraction = options.crucial_fraction;
        config.seed = options.seed;
        manifest.set_parameters({{"village_id", config.village_id},
                                 {"n_households", config.n_households},
                                 {"n_hubs", config.n_hubs},
                                 {"dependents_per_hub", config.dependents_per_hub},
                                 {"reciprocal_pair_rate", config.reciprocal_pair_rate},
                                 {"noise_link_rate", config.noise_link_rate},
                                 {"crucial_fraction", config.crucial_fraction},
                                 {"seed", config.seed}});

        SynthResult result = generate_village(config);
        std::span<const VillageDataset> villages(&result.dataset, 1);
        manifest.write_output("households.csv", households_csv(villages));
        manifest.write_output("links.csv", links_csv(villages));
        manifest.write_output("ground_truth.json", ground_truth_json(result.truth).dump(2) + "\n");
        manifest.finish();
        return kExitOk;
    });
}

int cmd_report(const ReportOptions& options) {
    return run_guarded([&] {
        Threshold threshold = Threshold::parse(options.threshold);
        RunManifest manifest("report", options.out_dir);
        auto run = ingest_for(options.households, options.links, options.members,
                              options.taxonomy, manifest);
        std::map<std::string, std::string> states;
        if (options.states) {
            manifest.note_input(*options.states);
            states = load_village_states_csv(*options.states);
        }
        manifest.set_parameters(
            {{"threshold", threshold.value()},
             {"format", options.format == OutputFormat::Json ? "json" : "text"},
             {"max_rejects", options.max_rejects}});

        std::vector<VillageClassification> classifications;
        std::set<std::string> elite_household_ids;  // "<village>/<household>"
        for (const auto& dataset : run.ingest.villages) {
            VillageAnalysis analysis = analyze_village(dataset, run.taxonomy, threshold);
            for (const auto& e : analysis.classification.elites) {
                elite_household_ids.insert(dataset.village_id + "/" + e.id);
            }
            classifications.push_back(std::move(analysis.classification));
        }

        ComparisonTable comparison = elite_nonelite_table(run.ingest.villages, classifications);
        VillageSummary summary = village_summary(classifications, states);

        // The occupation split profiles elite households, so restrict the
        // member pool to them.
        std::vector<Member> elite_members;
        for (const auto& dataset : run.ingest.villages) {
            for (const auto& [id, h] : dataset.households) {
                if (elite_household_ids.count(dataset.village_id + "/" + id)) {
                    elite_members.insert(elite_members.end(), h.members.begin(), h.members.end());
                }
            }
        }
        std::vector<OccupationRow> occupation = occupation_split(elite_members);

        std::optional<PatronagePattern> pattern;
        if (options.elite_services) {
            manifest.note_input(*options.elite_services);
            auto profiles = load_elite_services_csv(*options.elite_services, &run.ingest.report);
            pattern = patronage_pattern(profiles);
        }

        if (options.format == OutputFormat::Json) {
            json report{{"village_summary", village_summary_json(summary)},
                        {"elite_comparison", comparison_table_json(comparison)},
                        {"occupation_by_age_gender", occupation_rows_json(occupation)}};
            if (pattern) report["patronage_pattern"] = patronage_pattern_json(*pattern);
            manifest.write_output("report.json", report.dump(2) + "\n");
        } else {
            std::string text = village_summary_text(summary) + "\n" +
                               comparison_table_text(comparison) + "\n" +
                               occupation_rows_text(occupation);
            if (pattern) text += "\n" + patronage_pattern_text(*pattern);
            manifest.write_output("report.txt", text);
        }
        manifest.write_output("validation_report.txt", run.ingest.report.to_text());
        manifest.finish();
        return reject_gate(run.ingest.report, options.max_rejects);
    });
}

int cmd_export(const ExportOptions& options) {
    return run_guarded([&] {
        Threshold threshold = Threshold::parse(options.threshold);
        RunManifest manifest("export", options.out_dir);
        auto run = ingest_for(options.households, options.links, std::nullopt,
                              options.taxonomy, manifest);
        manifest.set_parameters({{"threshold", threshold.value()},
                                 {"village", options.village ? *options.village : ""},
                                 {"max_rejects", options.max_rejects}});

        bool found = false;
        for (const auto& dataset : run.ingest.villages) {
            if (options.village && dataset.village_id != *options.village) continue;
            found = true;
            VillageAnalysis analysis = analyze_village(dataset, run.taxonomy, threshold);
            manifest.write_output(safe_name(dataset.village_id) + ".dot",
                                  export_dot(analysis.network, analysis.classification));
        }
        if (options.village && !found) {
            std::cerr << "input error: village not found: " << *options.village << "\n";
            return kExitBadInput;
        }
        manifest.finish();
        return reject_gate(run.ingest.report, options.max_rejects);
    });
}

}  // namespace patronnet
