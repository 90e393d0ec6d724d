#include <string>

#include "CLI11.hpp"
#include "patronnet/commands.hpp"
#include "patronnet/util.hpp"

namespace {

using namespace patronnet;

void add_threshold(CLI::App* cmd, std::string& threshold) {
    cmd->add_option("--threshold", threshold, "elite cutoff as a decimal fraction in (0,1)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) +
                 " - dependence-network toolkit for household service surveys"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // ingest
    IngestOptions ingest;
    auto* cmd_i = app.add_subcommand("ingest", "validate survey files and write canonical copies");
    cmd_i->add_option("--households", ingest.households, "households.csv")->required();
    cmd_i->add_option("--links", ingest.links, "links.csv")->required();
    cmd_i->add_option("--members", ingest.members, "members.csv (optional)");
    cmd_i->add_option("--taxonomy", ingest.taxonomy, "service taxonomy file (default builtin)");
    cmd_i->add_option("--out", ingest.out_dir, "output directory")->required();
    cmd_i->add_option("--max-rejects", ingest.max_rejects, "tolerated rejected rows")
        ->capture_default_str();

    // analyze
    AnalyzeOptions analyze;
    auto* cmd_a = app.add_subcommand("analyze", "derive dependence networks and classify villages");
    cmd_a->add_option("--households", analyze.households, "households.csv")->required();
    cmd_a->add_option("--links", analyze.links, "links.csv")->required();
    cmd_a->add_option("--members", analyze.members, "members.csv (optional)");
    cmd_a->add_option("--taxonomy", analyze.taxonomy, "service taxonomy file (default builtin)");
    cmd_a->add_option("--states", analyze.states, "village_id,state map for the summary");
    add_threshold(cmd_a, analyze.threshold);
    cmd_a->add_option("--out", analyze.out_dir, "output directory")->required();
    cmd_a->add_option("--max-rejects", analyze.max_rejects, "tolerated rejected rows")
        ->capture_default_str();

    // sample
    SampleOptions sample;
    auto* cmd_s = app.add_subcommand("sample", "simulate the four-stage sample design");
    cmd_s->add_option("--strata", sample.strata, "strata CSV (default: builtin 13-stratum design)");
    cmd_s->add_option("--blocks", sample.blocks, "block frame CSV")->required();
    cmd_s->add_option("--villages", sample.villages, "village frame CSV")->required();
    cmd_s->add_option("--seed", sample.seed, "RNG seed")->required();
    cmd_s->add_option("--response-rate", sample.response_rate, "stage-4 response probability")
        ->capture_default_str();
    cmd_s->add_option("--exclude", sample.excluded_villages, "village ids to replace if drawn");
    cmd_s->add_option("--out", sample.out_dir, "output directory")->required();

    // synth
    SynthOptions synth;
    auto* cmd_y = app.add_subcommand("synth", "generate a synthetic village with planted hubs");
    cmd_y->add_option("--village-id", synth.village_id)->capture_default_str();
    cmd_y->add_option("--n-households", synth.n_households)->capture_default_str();
    cmd_y->add_option("--n-hubs", synth.n_hubs)->capture_default_str();
    cmd_y->add_option("--dependents-per-hub", synth.dependents_per_hub)->capture_default_str();
    cmd_y->add_option("--reciprocal-rate", synth.reciprocal_rate)->capture_default_str();
    cmd_y->add_option("--noise-rate", synth.noise_rate)->capture_default_str();
    cmd_y->add_option("--crucial-fraction", synth.crucial_fraction)->capture_default_str();
    cmd_y->add_option("--seed", synth.seed, "RNG seed")->required();
    cmd_y->add_option("--out", synth.out_dir, "output directory")->required();

    // report
    ReportOptions report;
    auto* cmd_r = app.add_subcommand("report", "statistical report tables");
    cmd_r->add_option("--households", report.households, "households.csv")->required();
    cmd_r->add_option("--links", report.links, "links.csv")->required();
    cmd_r->add_option("--members", report.members, "members.csv (optional)");
    cmd_r->add_option("--taxonomy", report.taxonomy, "service taxonomy file (default builtin)");
    cmd_r->add_option("--elite-services", report.elite_services, "elite_services.csv (optional)");
    cmd_r->add_option("--states", report.states, "village_id,state map for the summary");
    add_threshold(cmd_r, report.threshold);
    std::string format = "json";
    cmd_r->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    cmd_r->add_option("--out", report.out_dir, "output directory")->required();
    cmd_r->add_option("--max-rejects", report.max_rejects, "tolerated rejected rows")
        ->capture_default_str();

    // export
    ExportOptions export_opts;
    auto* cmd_e = app.add_subcommand("export", "Graphviz DOT export of dependence networks");
    cmd_e->add_option("--households", export_opts.households, "households.csv")->required();
    cmd_e->add_option("--links", export_opts.links, "links.csv")->required();
    cmd_e->add_option("--taxonomy", export_opts.taxonomy, "service taxonomy file (default builtin)");
    cmd_e->add_option("--village", export_opts.village, "export only this village");
    add_threshold(cmd_e, export_opts.threshold);
    cmd_e->add_option("--out", export_opts.out_dir, "output directory")->required();
    cmd_e->add_option("--max-rejects", export_opts.max_rejects, "tolerated rejected rows")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (cmd_i->parsed()) return cmd_ingest(ingest);
    if (cmd_a->parsed()) return cmd_analyze(analyze);
    if (cmd_s->parsed()) return cmd_sample(sample);
    if (cmd_y->parsed()) return cmd_synth(synth);
    if (cmd_r->parsed()) {
        report.format = format == "text" ? OutputFormat::Text : OutputFormat::Json;
        return cmd_report(report);
    }
    if (cmd_e->parsed()) return cmd_export(export_opts);
    return kExitInternal;
}
