#include "patronnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "patronnet/csv.hpp"

namespace patronnet {

namespace {

std::optional<bool> parse_flag(const std::string& s) {
    if (s == "0") return false;
    if (s == "1") return true;
    return std::nullopt;
}

std::optional<double> parse_double(const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> parse_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::string ValidationReport::to_text() const {
    std::string out;
    out += "households read: " + std::to_string(households_read) + "\n";
    out += "links read: " + std::to_string(links_read) + "\n";
    out += "members read: " + std::to_string(members_read) + "\n";
    out += "rows rejected: " + std::to_string(rejects.size()) + "\n";
    out += "duplicate link reports collapsed: " + std::to_string(reconcile.duplicates_collapsed) + "\n";
    out += "unconfirmed reciprocal claims dropped: " +
           std::to_string(reconcile.unconfirmed_claims_dropped) + "\n";
    for (const auto& r : rejects) {
        out += r.file + ":" + std::to_string(r.line) + ": " + r.reason + "\n";
    }
    return out;
}

IngestResult ingest_survey(const std::filesystem::path& households_path,
                           const std::filesystem::path& links_path,
                           const ServiceTaxonomy& taxonomy,
                           const std::optional<std::filesystem::path>& members_path) {
    IngestResult result;
    auto& report = result.report;
    std::map<std::string, VillageDataset> villages;

    auto reject = [&](const std::filesystem::path& file, std::size_t line, std::string reason) {
        report.rejects.push_back({file.filename().string(), line, std::move(reason)});
    };

    // --- households ---
    {
        csv::Table table = csv::read_file(households_path);
        csv::Columns cols(table,
                          {"village_id", "household_id", "sampled", "caste_group",
                           "landholding_acres", "asset_brick", "asset_townhouse", "asset_palang",
                           "asset_tractor", "asset_auto", "main_occupation", "heritage"},
                          households_path.filename().string());
        for (const auto& row : table.rows) {
            ++report.households_read;
            HouseholdRecord h;
            h.village_id = cols.get(row, "village_id");
            h.household_id = cols.get(row, "household_id");
            if (h.village_id.empty() || h.household_id.empty()) {
                reject(households_path, row.line, "empty village_id or household_id");
                continue;
            }

            auto sampled = parse_flag(cols.get(row, "sampled"));
            if (!sampled) {
                reject(households_path, row.line, "sampled must be 0 or 1");
                continue;
            }
            h.sampled = *sampled;

            auto caste = caste_from_token(cols.get(row, "caste_group"));
            if (!caste) {
                reject(households_path, row.line,
                       "bad caste_group token: " + cols.get(row, "caste_group"));
                continue;
            }
            h.caste = *caste;

            const std::string& acres = cols.get(row, "landholding_acres");
            if (!acres.empty()) {
                auto v = parse_double(acres);
                if (!v || *v < 0) {
                    reject(households_path, row.line, "landholding_acres must be a non-negative number");
                    continue;
                }
                h.landholding_acres = *v;
            }

            // Absent asset flags count as not owned.
            bool flags_ok = true;
            auto asset = [&](const char* col) {
                const std::string& s = cols.get(row, col);
                if (s.empty()) return false;
                auto f = parse_flag(s);
                if (!f) {
                    flags_ok = false;
                    return false;
                }
                return *f;
            };
            h.assets.brick_house = asset("asset_brick");
            h.assets.town_house = asset("asset_townhouse");
            h.assets.palang = asset("asset_palang");
            h.assets.tractor = asset("asset_tractor");
            h.assets.automobile = asset("asset_auto");
            if (!flags_ok) {
                reject(households_path, row.line, "asset flags must be 0, 1 or empty");
                continue;
            }

            auto occupation = occupation_from_token(cols.get(row, "main_occupation"));
            if (!occupation) {
                reject(households_path, row.line,
                       "bad main_occupation token: " + cols.get(row, "main_occupation"));
                continue;
            }
            h.occupation = *occupation;

            const std::string& heritage = cols.get(row, "heritage");
            if (!heritage.empty()) {
                auto f = parse_flag(heritage);
                if (!f) {
                    reject(households_path, row.line, "heritage must be 0, 1 or empty");
                    continue;
                }
                h.heritage = *f;
            }

            auto& village = villages[h.village_id];
            village.village_id = h.village_id;
            if (village.households.count(h.household_id)) {
                reject(households_path, row.line,
                       "duplicate household id within village: " + h.household_id);
                continue;
            }
            village.households.emplace(h.household_id, std::move(h));
        }
    }

    // --- members (optional) ---
    if (members_path) {
        csv::Table table = csv::read_file(*members_path);
        csv::Columns cols(table, {"village_id", "household_id", "age", "gender", "studying", "activity"},
                          members_path->filename().string());
        for (const auto& row : table.rows) {
            ++report.members_read;
            const std::string& village_id = cols.get(row, "village_id");
            const std::string& household_id = cols.get(row, "household_id");
            auto vit = villages.find(village_id);
            if (vit == villages.end() || !vit->second.has_household(household_id)) {
                reject(*members_path, row.line,
                       "member references unknown household: " + village_id + "/" + household_id);
                continue;
            }
            Member m;
            auto age = parse_int(cols.get(row, "age"));
            if (!age || *age < 0) {
                reject(*members_path, row.line, "age must be a non-negative integer");
                continue;
            }
            m.age = *age;
            auto gender = gender_from_token(cols.get(row, "gender"));
            if (!gender) {
                reject(*members_path, row.line, "bad gender token: " + cols.get(row, "gender"));
                continue;
            }
            m.gender = *gender;
            auto studying = parse_flag(cols.get(row, "studying"));
            if (!studying) {
                reject(*members_path, row.line, "studying must be 0 or 1");
                continue;
            }
            m.studying = *studying;
            auto activity = activity_from_token(cols.get(row, "activity"));
            if (!activity) {
                reject(*members_path, row.line, "bad activity token: " + cols.get(row, "activity"));
                continue;
            }
            m.activity = *activity;
            vit->second.households.at(household_id).members.push_back(m);
        }
    }

    // --- links ---
    std::map<std::string, std::vector<ServiceLinkRecord>> raw_links;
    {
        csv::Table table = csv::read_file(links_path);
        csv::Columns cols(table, {"village_id", "receiver_id", "provider_id", "service_kind", "reporter_id"},
                          links_path.filename().string());
        for (const auto& row : table.rows) {
            ++report.links_read;
            const std::string& village_id = cols.get(row, "village_id");
            ServiceLinkRecord link{cols.get(row, "receiver_id"), cols.get(row, "provider_id"),
                                   cols.get(row, "service_kind"), cols.get(row, "reporter_id")};
            auto vit = villages.find(village_id);
            if (vit == villages.end()) {
                reject(links_path, row.line, "link references unknown village: " + village_id);
                continue;
            }
            if (link.receiver == link.provider) {
                reject(links_path, row.line, "self-link rejected: " + link.receiver);
                continue;
            }
            if (!taxonomy.contains(link.kind)) {
                reject(links_path, row.line, "unknown service kind: " + link.kind);
                continue;
            }
            auto hit = vit->second.households.find(link.receiver);
            if (hit == vit->second.households.end()) {
                reject(links_path, row.line, "link receiver not found in households: " + link.receiver);
                continue;
            }
            if (!hit->second.sampled) {
                reject(links_path, row.line,
                       "link receiver is not a sampled household: " + link.receiver);
                continue;
            }
            raw_links[village_id].push_back(std::move(link));
        }
    }

    for (auto& [village_id, raw] : raw_links) {
        villages.at(village_id).links = reconcile_claims(raw, &report.reconcile);
    }

    result.villages.reserve(villages.size());
    for (auto& [id, v] : villages) {
        result.villages.push_back(std::move(v));
    }
    return result;
}

}  // namespace patronnet
