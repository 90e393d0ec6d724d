#include "patronnet/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "patronnet/csv.hpp"
#include "patronnet/util.hpp"

namespace patronnet {

namespace {

std::int64_t parse_count(const std::string& text, const std::filesystem::path& file,
                         std::size_t line, const char* field) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw csv::SchemaError(file.string() + ":" + std::to_string(line) + ": " + field +
                               " must be an integer, got '" + text + "'");
    }
    return v;
}

}  // namespace

const char* to_string(SurveyState s) {
    switch (s) {
        case SurveyState::EasternUp: return "EasternUP";
        case SurveyState::Odisha: return "Odisha";
        case SurveyState::Maharashtra: return "Maharashtra";
    }
    return "?";
}

std::optional<SurveyState> state_from_token(const std::string& token) {
    if (token == "EasternUP") return SurveyState::EasternUp;
    if (token == "Odisha") return SurveyState::Odisha;
    if (token == "Maharashtra") return SurveyState::Maharashtra;
    return std::nullopt;
}

std::string Stratum::key() const {
    std::string k = to_string(state);
    k += ':';
    k += lwe ? "L" : "NL";
    k += '/';
    k += coastal ? "CO" : "NC";
    k += '/';
    k += ryotwari ? "RY" : "NR";
    return k;
}

std::vector<Stratum> default_strata() {
    using enum SurveyState;
    // state, lwe, coastal, ryotwari, quota, forest target
    return {
        {EasternUp, true, false, false, 4, 3},
        {EasternUp, false, false, false, 8, 0},
        {Odisha, true, true, false, 2, 1},
        {Odisha, true, false, false, 3, 2},
        {Odisha, true, false, true, 1, 1},
        {Odisha, false, true, false, 2, 0},
        {Odisha, false, false, false, 3, 0},
        {Odisha, false, false, true, 1, 0},
        {Maharashtra, true, false, false, 4, 3},
        {Maharashtra, false, true, false, 1, 0},
        {Maharashtra, false, true, true, 2, 0},
        {Maharashtra, false, false, false, 2, 0},
        {Maharashtra, false, false, true, 3, 0},
    };
}

double BlockFrame::forested_share() const {
    std::int64_t total = 0;
    std::int64_t forested = 0;
    for (const auto& v : villages) {
        total += v.households;
        if (v.forested) forested += v.households;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(forested) / static_cast<double>(total);
}

PpsPick pps_select(std::span<const PpsUnit> units, std::size_t k, Rng& rng) {
    if (k > units.size()) {
        throw InfeasibleSelection("pps_select: k=" + std::to_string(k) + " exceeds " +
                                  std::to_string(units.size()) + " units");
    }
    for (const auto& u : units) {
        if (!(u.size > 0)) throw ZeroSize("pps_select: unit '" + u.id + "' has size <= 0");
    }

    PpsPick pick;
    if (k == 0) return pick;

    std::vector<const PpsUnit*> remaining;
    remaining.reserve(units.size());
    for (const auto& u : units) remaining.push_back(&u);
    std::size_t k_left = k;

    // Pull certainty units (size >= skip) until none remain; removing one
    // shrinks the skip, so the scan repeats.
    bool changed = true;
    while (changed && k_left > 0) {
        changed = false;
        double total = 0;
        for (const auto* u : remaining) total += u->size;
        double skip = total / static_cast<double>(k_left);
        for (auto it = remaining.begin(); it != remaining.end();) {
            if ((*it)->size >= skip) {
                pick.certainty.push_back((*it)->id);
                pick.selected.push_back((*it)->id);
                it = remaining.erase(it);
                --k_left;
                changed = true;
                if (k_left == 0) break;
                total = 0;
                for (const auto* u : remaining) total += u->size;
                skip = total / static_cast<double>(k_left);
            } else {
                ++it;
            }
        }
    }
    if (k_left == 0) return pick;

    double total = 0;
    for (const auto* u : remaining) total += u->size;
    pick.skip = total / static_cast<double>(k_left);
    pick.random_start = rng.unit() * pick.skip;

    // Every remaining size is below the skip, so each interval holds at
    // most one selection point.
    double cumulative = 0;
    std::size_t point = 0;
    for (const auto* u : remaining) {
        double next = cumulative + u->size;
        double target = pick.random_start + static_cast<double>(point) * pick.skip;
        if (point < k_left && target < next && target >= cumulative) {
            pick.selected.push_back(u->id);
            ++point;
        }
        cumulative = next;
    }
    // Floating-point edge: if rounding left a point unassigned, take the
    // last unselected units in order.
    for (auto it = remaining.rbegin(); point < k_left && it != remaining.rend(); ++it) {
        if (std::find(pick.selected.begin(), pick.selected.end(), (*it)->id) == pick.selected.end()) {
            pick.selected.push_back((*it)->id);
            ++point;
        }
    }
    return pick;
}

std::vector<StratumSelection> stage1_select_blocks(std::span<const Stratum> strata,
                                                   std::span<const BlockFrame> frames, Rng& rng) {
    std::vector<StratumSelection> selections;
    selections.reserve(strata.size());
    for (const auto& stratum : strata) {
        std::vector<PpsUnit> units;
        for (const auto& frame : frames) {
            if (frame.stratum_key == stratum.key()) {
                units.push_back(PpsUnit{frame.block_id, static_cast<double>(frame.household_count)});
            }
        }
        if (units.size() < static_cast<std::size_t>(stratum.block_quota)) {
            throw InfeasibleSelection("stratum " + stratum.key() + ": quota " +
                                      std::to_string(stratum.block_quota) + " exceeds " +
                                      std::to_string(units.size()) + " blocks in frame");
        }
        StratumSelection sel;
        sel.stratum_key = stratum.key();
        sel.quota = stratum.block_quota;
        sel.pick = pps_select(units, static_cast<std::size_t>(stratum.block_quota), rng);
        selections.push_back(std::move(sel));
    }
    return selections;
}

ForestAssignment stage2_assign_forest(const std::string& stratum_key,
                                      std::span<const BlockFrame> selected_blocks,
                                      int forest_target, Rng& rng) {
    ForestAssignment a;
    a.stratum_key = stratum_key;
    a.forest_target = forest_target;

    std::vector<const BlockFrame*> eligible;
    for (const auto& block : selected_blocks) {
        if (block.forested_share() > 0) {
            eligible.push_back(&block);
        } else {
            a.auto_non_forest.push_back(block.block_id);
            a.non_forest_blocks.push_back(block.block_id);
        }
    }

    if (forest_target == 0) {
        for (const auto* b : eligible) a.non_forest_blocks.push_back(b->block_id);
        return a;
    }
    if (static_cast<int>(eligible.size()) < forest_target) {
        throw InfeasibleAssignment("stratum " + stratum_key + ": forest target " +
                                   std::to_string(forest_target) + " exceeds " +
                                   std::to_string(eligible.size()) + " blocks with forested villages");
    }
    if (static_cast<int>(eligible.size()) == forest_target) {
        for (const auto* b : eligible) a.forest_blocks.push_back(b->block_id);
        return a;
    }

    std::vector<PpsUnit> units;
    for (const auto* b : eligible) units.push_back(PpsUnit{b->block_id, b->forested_share()});
    PpsPick pick = pps_select(units, static_cast<std::size_t>(forest_target), rng);
    a.drawn_by_pps = true;
    std::set<std::string> chosen(pick.selected.begin(), pick.selected.end());
    for (const auto* b : eligible) {
        if (chosen.count(b->block_id)) {
            a.forest_blocks.push_back(b->block_id);
        } else {
            a.non_forest_blocks.push_back(b->block_id);
        }
    }
    return a;
}

VillagePick stage3_select_village(const BlockFrame& block, bool forested_only,
                                  const std::set<std::string>& excluded, Rng& rng) {
    VillagePick pick;
    pick.block_id = block.block_id;
    pick.forested_only = forested_only;

    std::vector<PpsUnit> units;
    for (const auto& v : block.villages) {
        if (forested_only && !v.forested) continue;
        units.push_back(PpsUnit{v.village_id, static_cast<double>(v.households)});
    }
    for (;;) {
        if (units.empty()) {
            throw NoEligibleVillage("block " + block.block_id + ": no eligible village" +
                                    (forested_only ? " (forested only)" : ""));
        }
        std::string drawn = pps_select(units, 1, rng).selected.at(0);
        if (!excluded.count(drawn)) {
            pick.village_id = drawn;
            return pick;
        }
        pick.exclusions_skipped.push_back(drawn);
        units.erase(std::find_if(units.begin(), units.end(),
                                 [&](const PpsUnit& u) { return u.id == drawn; }));
    }
}

Stage4Result stage4_select_households(const std::vector<std::string>& roster,
                                      const std::function<bool(const std::string&)>& responds,
                                      Rng& rng, int target, int cap) {
    if (roster.empty()) throw InfeasibleSelection("stage4: empty roster");
    if (target < 1 || cap < target) throw InfeasibleSelection("stage4: invalid target/cap");

    Stage4Result result;
    auto attempt = [&](const std::string& id, int round) {
        bool ok = responds(id);
        result.attempts.push_back(Stage4Attempt{id, round, ok});
        if (ok) result.respondents.push_back(id);
    };

    if (roster.size() <= static_cast<std::size_t>(target)) {
        result.census = true;
        for (const auto& id : roster) attempt(id, 1);
        result.short_sample =
            result.respondents.size() < std::min(roster.size(), static_cast<std::size_t>(target));
        return result;
    }

    std::vector<std::string> pool = roster;
    auto draw_one = [&]() {
        std::size_t idx = static_cast<std::size_t>(rng.below(pool.size()));
        std::string id = pool[idx];
        pool[idx] = pool.back();
        pool.pop_back();
        return id;
    };

    std::size_t initial = std::min(pool.size(), static_cast<std::size_t>(cap));
    for (std::size_t i = 0; i < initial; ++i) attempt(draw_one(), 1);

    int round = 1;
    while (result.respondents.size() < static_cast<std::size_t>(target) && !pool.empty()) {
        ++round;
        std::size_t batch =
            std::min(pool.size(), static_cast<std::size_t>(target) - result.respondents.size());
        for (std::size_t i = 0; i < batch; ++i) attempt(draw_one(), round);
    }
    result.short_sample = result.respondents.size() < static_cast<std::size_t>(target);
    return result;
}

std::vector<Stratum> load_strata_csv(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    csv::Columns cols(table, {"state", "lwe", "coastal", "ryotwari", "quota", "forest_target"},
                      path.filename().string());
    std::vector<Stratum> strata;
    for (const auto& row : table.rows) {
        Stratum s;
        auto state = state_from_token(cols.get(row, "state"));
        if (!state) {
            throw csv::SchemaError(path.string() + ":" + std::to_string(row.line) +
                                   ": bad state token: " + cols.get(row, "state"));
        }
        s.state = *state;
        s.lwe = cols.get(row, "lwe") == "1";
        s.coastal = cols.get(row, "coastal") == "1";
        s.ryotwari = cols.get(row, "ryotwari") == "1";
        s.block_quota = static_cast<int>(parse_count(cols.get(row, "quota"), path, row.line, "quota"));
        s.forest_target = static_cast<int>(
            parse_count(cols.get(row, "forest_target"), path, row.line, "forest_target"));
        if (s.block_quota < 1) {
            throw csv::SchemaError(path.string() + ":" + std::to_string(row.line) +
                                   ": quota must be >= 1");
        }
        strata.push_back(s);
    }
    return strata;
}

std::vector<BlockFrame> load_frames_csv(const std::filesystem::path& blocks_path,
                                        const std::filesystem::path& villages_path) {
    std::map<std::string, BlockFrame> blocks;
    {
        csv::Table table = csv::read_file(blocks_path);
        csv::Columns cols(table, {"block_id", "stratum_key", "block_households"},
                          blocks_path.filename().string());
        for (const auto& row : table.rows) {
            BlockFrame frame;
            frame.block_id = cols.get(row, "block_id");
            frame.stratum_key = cols.get(row, "stratum_key");
            frame.household_count = parse_count(cols.get(row, "block_households"), blocks_path,
                                                row.line, "block_households");
            if (frame.household_count < 1) {
                throw csv::SchemaError(blocks_path.string() + ":" + std::to_string(row.line) +
                                       ": block_households must be >= 1");
            }
            if (!blocks.emplace(frame.block_id, std::move(frame)).second) {
                throw csv::SchemaError(blocks_path.string() + ":" + std::to_string(row.line) +
                                       ": duplicate block_id");
            }
        }
    }
    {
        csv::Table table = csv::read_file(villages_path);
        csv::Columns cols(table, {"block_id", "village_id", "village_households", "forested"},
                          villages_path.filename().string());
        for (const auto& row : table.rows) {
            const std::string& block_id = cols.get(row, "block_id");
            auto it = blocks.find(block_id);
            if (it == blocks.end()) {
                throw csv::SchemaError(villages_path.string() + ":" + std::to_string(row.line) +
                                       ": unknown block_id: " + block_id);
            }
            VillageEntry v;
            v.village_id = cols.get(row, "village_id");
            v.households = parse_count(cols.get(row, "village_households"), villages_path,
                                       row.line, "village_households");
            v.forested = cols.get(row, "forested") == "1";
            if (v.households < 1) {
                throw csv::SchemaError(villages_path.string() + ":" + std::to_string(row.line) +
                                       ": village_households must be >= 1");
            }
            it->second.villages.push_back(std::move(v));
        }
    }
    std::vector<BlockFrame> frames;
    frames.reserve(blocks.size());
    for (auto& [id, frame] : blocks) frames.push_back(std::move(frame));
    return frames;
}

SelectionTrace run_sample_design(std::span<const Stratum> strata,
                                 std::span<const BlockFrame> frames,
                                 const SampleRunConfig& config) {
    Rng rng(config.seed);
    SelectionTrace trace;
    trace.seed = config.seed;

    std::map<std::string, const BlockFrame*> frame_by_id;
    for (const auto& f : frames) frame_by_id[f.block_id] = &f;

    trace.stage1 = stage1_select_blocks(strata, frames, rng);

    std::map<std::string, bool> block_is_forest;
    for (std::size_t i = 0; i < strata.size(); ++i) {
        const Stratum& stratum = strata[i];
        if (!stratum.lwe) continue;
        std::vector<BlockFrame> selected;
        for (const auto& id : trace.stage1[i].pick.selected) {
            selected.push_back(*frame_by_id.at(id));
        }
        ForestAssignment a =
            stage2_assign_forest(stratum.key(), selected, stratum.forest_target, rng);
        for (const auto& id : a.forest_blocks) block_is_forest[id] = true;
        trace.stage2.push_back(std::move(a));
    }

    for (const auto& sel : trace.stage1) {
        for (const auto& block_id : sel.pick.selected) {
            const BlockFrame& block = *frame_by_id.at(block_id);
            bool forested_only = block_is_forest.count(block_id) != 0;
            trace.stage3.push_back(
                stage3_select_village(block, forested_only, config.excluded_villages, rng));
        }
    }

    for (const auto& pick : trace.stage3) {
        const BlockFrame& block = *frame_by_id.at(pick.block_id);
        auto vit = std::find_if(block.villages.begin(), block.villages.end(),
                                [&](const VillageEntry& v) { return v.village_id == pick.village_id; });
        std::vector<std::string> roster;
        roster.reserve(static_cast<std::size_t>(vit->households));
        for (std::int64_t i = 1; i <= vit->households; ++i) {
            std::string n = std::to_string(i);
            if (n.size() < 4) n.insert(0, 4 - n.size(), '0');
            roster.push_back(pick.village_id + "-H" + n);
        }
        auto responds = [&](const std::string&) {
            return config.response_rate >= 1.0 || rng.unit() < config.response_rate;
        };
        SelectionTrace::VillageSample sample;
        sample.block_id = pick.block_id;
        sample.village_id = pick.village_id;
        sample.roster_size = vit->households;
        sample.result = stage4_select_households(roster, responds, rng, config.household_target,
                                                 config.household_cap);
        trace.stage4.push_back(std::move(sample));
    }
    return trace;
}

nlohmann::json trace_json(const SelectionTrace& trace) {
    nlohmann::json stage1 = nlohmann::json::array();
    for (const auto& sel : trace.stage1) {
        stage1.push_back({{"stratum", sel.stratum_key},
                          {"quota", sel.quota},
                          {"blocks", sel.pick.selected},
                          {"certainty_blocks", sel.pick.certainty},
                          {"random_start", sel.pick.random_start},
                          {"skip", sel.pick.skip}});
    }
    nlohmann::json stage2 = nlohmann::json::array();
    for (const auto& a : trace.stage2) {
        stage2.push_back({{"stratum", a.stratum_key},
                          {"forest_target", a.forest_target},
                          {"forest", a.forest_blocks},
                          {"non_forest", a.non_forest_blocks},
                          {"auto_non_forest", a.auto_non_forest},
                          {"drawn_by_pps", a.drawn_by_pps}});
    }
    nlohmann::json stage3 = nlohmann::json::array();
    for (const auto& pick : trace.stage3) {
        stage3.push_back({{"block_id", pick.block_id},
                          {"village_id", pick.village_id},
                          {"forested_only", pick.forested_only},
                          {"exclusions_skipped", pick.exclusions_skipped}});
    }
    nlohmann::json stage4 = nlohmann::json::array();
    for (const auto& sample : trace.stage4) {
        nlohmann::json attempts = nlohmann::json::array();
        for (const auto& a : sample.result.attempts) {
            attempts.push_back({{"household_id", a.household_id},
                                {"round", a.round},
                                {"responded", a.responded}});
        }
        stage4.push_back({{"block_id", sample.block_id},
                          {"village_id", sample.village_id},
                          {"roster_size", sample.roster_size},
                          {"census", sample.result.census},
                          {"short_sample", sample.result.short_sample},
                          {"respondents", sample.result.respondents},
                          {"attempts", attempts}});
    }
    return nlohmann::json{{"seed", trace.seed},
                          {"stage1", stage1},
                          {"stage2", stage2},
                          {"stage3", stage3},
                          {"stage4", stage4}};
}

}  // namespace patronnet
