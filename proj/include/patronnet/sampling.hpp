#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "patronnet/rng.hpp"

namespace patronnet {

struct InfeasibleSelection : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroSize : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleAssignment : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoEligibleVillage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SurveyState { EasternUp, Odisha, Maharashtra };

const char* to_string(SurveyState s);
std::optional<SurveyState> state_from_token(const std::string& token);

// One cell of the block-selection design: state x LWE activity x coastal x
// land-revenue history, with its block quota and forest-subsample target.
struct Stratum {
    SurveyState state = SurveyState::EasternUp;
    bool lwe = false;
    bool coastal = false;
    bool ryotwari = false;
    int block_quota = 0;
    int forest_target = 0;  // LWE strata only; 0 elsewhere

    std::string key() const;  // e.g. "Odisha:L/CO/NR"
};

// The default 13-stratum design: 36 blocks total, 12 per state.
std::vector<Stratum> default_strata();

struct VillageEntry {
    std::string village_id;
    std::int64_t households = 0;
    bool forested = false;
};

struct BlockFrame {
    std::string block_id;
    std::string stratum_key;
    std::int64_t household_count = 0;  // census size measure
    std::vector<VillageEntry> villages;

    double forested_share() const;  // households in forested villages / all households listed
};

// --- systematic PPS ---

struct PpsUnit {
    std::string id;
    double size = 0;
};

struct PpsPick {
    std::vector<std::string> selected;   // certainty units first, then systematic picks in list order
    std::vector<std::string> certainty;  // units whose size reached the skip interval
    double random_start = -1;            // -1 when no systematic round was needed
    double skip = 0;
};

// Selects k distinct units without replacement. Units whose size reaches the
// skip interval are certainty selections, removed, and the skip recomputed;
// the remainder is drawn systematically from a random start on the
// cumulative size scale. Inclusion probability of a non-certainty unit is
// proportional to its size.
PpsPick pps_select(std::span<const PpsUnit> units, std::size_t k, Rng& rng);

// --- stage 1: blocks per stratum ---

struct StratumSelection {
    std::string stratum_key;
    int quota = 0;
    PpsPick pick;
};

std::vector<StratumSelection> stage1_select_blocks(std::span<const Stratum> strata,
                                                   std::span<const BlockFrame> frames, Rng& rng);

// --- stage 2: forest / non-forest assignment of LWE blocks ---

struct ForestAssignment {
    std::string stratum_key;
    int forest_target = 0;
    std::vector<std::string> forest_blocks;
    std::vector<std::string> non_forest_blocks;
    std::vector<std::string> auto_non_forest;  // no forested village; assigned without a draw
    bool drawn_by_pps = false;
};

// Blocks without any forested village are assigned to the non-forest
// sub-sample outright; if the rest exactly meets the target they are all
// forest, otherwise the forest subset is drawn by PPS on the share of
// households living in forested villages.
ForestAssignment stage2_assign_forest(const std::string& stratum_key,
                                      std::span<const BlockFrame> selected_blocks,
                                      int forest_target, Rng& rng);

// --- stage 3: one village per block ---

struct VillagePick {
    std::string block_id;
    std::string village_id;
    bool forested_only = false;
    std::vector<std::string> exclusions_skipped;
};

VillagePick stage3_select_village(const BlockFrame& block, bool forested_only,
                                  const std::set<std::string>& excluded, Rng& rng);

// --- stage 4: households within the village ---

struct Stage4Attempt {
    std::string household_id;
    int round = 0;
    bool responded = false;
};

struct Stage4Result {
    std::vector<std::string> respondents;  // in attempt order
    std::vector<Stage4Attempt> attempts;
    bool census = false;
    bool short_sample = false;  // roster exhausted below the target
};

// Census when the roster is within the target; otherwise an initial simple
// random draw of up to `cap`, then shortfall-sized replenishment draws from
// the remainder until the target responds or the roster is exhausted.
Stage4Result stage4_select_households(const std::vector<std::string>& roster,
                                      const std::function<bool(const std::string&)>& responds,
                                      Rng& rng, int target = 100, int cap = 110);

// --- frame files and the end-to-end run ---

std::vector<Stratum> load_strata_csv(const std::filesystem::path& path);
std::vector<BlockFrame> load_frames_csv(const std::filesystem::path& blocks_path,
                                        const std::filesystem::path& villages_path);

struct SampleRunConfig {
    std::uint64_t seed = 0;
    double response_rate = 1.0;           // stage-4 response oracle
    std::set<std::string> excluded_villages;
    int household_target = 100;
    int household_cap = 110;
};

struct SelectionTrace {
    std::uint64_t seed = 0;
    std::vector<StratumSelection> stage1;
    std::vector<ForestAssignment> stage2;
    std::vector<VillagePick> stage3;
    struct VillageSample {
        std::string block_id;
        std::string village_id;
        std::int64_t roster_size = 0;
        Stage4Result result;
    };
    std::vector<VillageSample> stage4;
};

SelectionTrace run_sample_design(std::span<const Stratum> strata,
                                 std::span<const BlockFrame> frames,
                                 const SampleRunConfig& config);

nlohmann::json trace_json(const SelectionTrace& trace);

}  // namespace patronnet
