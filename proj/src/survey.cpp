#include "patronnet/survey.hpp"

#include <algorithm>
#include <tuple>

#include "patronnet/csv.hpp"
#include "patronnet/util.hpp"

namespace patronnet {

const char* to_token(CasteGroup g) {
    switch (g) {
        case CasteGroup::UpperOrGeneral: return "upper_general";
        case CasteGroup::Obc: return "obc";
        case CasteGroup::ScSt: return "sc_st";
        case CasteGroup::Muslim: return "muslim";
        case CasteGroup::OtherMissing: return "other";
    }
    return "?";
}

const char* to_token(Occupation o) {
    switch (o) {
        case Occupation::Farming: return "farming";
        case Occupation::Business: return "business";
        case Occupation::Salaried: return "salaried";
        case Occupation::ManualLabour: return "manual_labour";
        case Occupation::Other: return "other";
    }
    return "?";
}

const char* to_token(Gender g) {
    switch (g) {
        case Gender::Male: return "male";
        case Gender::Female: return "female";
        case Gender::Other: return "other";
    }
    return "?";
}

const char* to_token(Activity a) {
    switch (a) {
        case Activity::Farming: return "farming";
        case Activity::BusinessSalariedHighSkill: return "business_salaried_highskill";
        case Activity::ManualLowSkill: return "manual_lowskill";
    }
    return "?";
}

std::optional<CasteGroup> caste_from_token(const std::string& token) {
    if (token == "upper_general") return CasteGroup::UpperOrGeneral;
    if (token == "obc") return CasteGroup::Obc;
    if (token == "sc_st") return CasteGroup::ScSt;
    if (token == "muslim") return CasteGroup::Muslim;
    if (token == "other" || token.empty()) return CasteGroup::OtherMissing;
    return std::nullopt;
}

std::optional<Occupation> occupation_from_token(const std::string& token) {
    if (token == "farming") return Occupation::Farming;
    if (token == "business") return Occupation::Business;
    if (token == "salaried") return Occupation::Salaried;
    if (token == "manual_labour") return Occupation::ManualLabour;
    if (token == "other" || token.empty()) return Occupation::Other;
    return std::nullopt;
}

std::optional<Gender> gender_from_token(const std::string& token) {
    if (token == "male") return Gender::Male;
    if (token == "female") return Gender::Female;
    if (token == "other") return Gender::Other;
    return std::nullopt;
}

std::optional<Activity> activity_from_token(const std::string& token) {
    if (token == "farming") return Activity::Farming;
    if (token == "business" || token == "salaried" || token == "high_skill" ||
        token == "business_salaried_highskill") {
        return Activity::BusinessSalariedHighSkill;
    }
    if (token == "manual_labour" || token == "low_skill" || token == "manual_lowskill") {
        return Activity::ManualLowSkill;
    }
    return std::nullopt;
}

std::size_t VillageDataset::n_sampled() const {
    std::size_t n = 0;
    for (const auto& [id, h] : households) {
        if (h.sampled) ++n;
    }
    return n;
}

int wealth_index(const HouseholdRecord& h) {
    return int(h.assets.brick_house) + int(h.assets.town_house) + int(h.assets.palang) +
           int(h.assets.tractor) + int(h.assets.automobile);
}

DummyRecord derive_dummies(const HouseholdRecord& h) {
    DummyRecord d;
    d.upper_caste = (h.caste == CasteGroup::UpperOrGeneral || h.caste == CasteGroup::Obc) ? 1 : 0;
    if (h.landholding_acres) {
        d.landholding_ge_1acre = (*h.landholding_acres >= 1.0) ? 1 : 0;
    }
    d.stable_occupation =
        (h.occupation == Occupation::Business || h.occupation == Occupation::Salaried) ? 1 : 0;
    if (h.heritage) d.heritage = *h.heritage ? 1 : 0;
    return d;
}

std::vector<ServiceLinkRecord> reconcile_claims(const std::vector<ServiceLinkRecord>& raw,
                                                ReconcileStats* stats) {
    // Group assertions about the same (receiver, provider, kind).
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<const ServiceLinkRecord*>>
        groups;
    for (const auto& r : raw) {
        groups[{r.receiver, r.provider, r.kind}].push_back(&r);
    }

    std::vector<ServiceLinkRecord> canonical;
    canonical.reserve(groups.size());
    for (const auto& [key, records] : groups) {
        const auto& [receiver, provider, kind] = key;
        bool receiver_reported =
            std::any_of(records.begin(), records.end(),
                        [&](const ServiceLinkRecord* r) { return r->reporter == receiver; });
        if (receiver_reported) {
            canonical.push_back(ServiceLinkRecord{receiver, provider, kind, receiver});
            if (stats) stats->duplicates_collapsed += records.size() - 1;
        } else {
            // Claimed only by a third party (in practice the provider's
            // reciprocation answer) and absent from the receiver's own
            // survey: the receiver's account wins.
            if (stats) stats->unconfirmed_claims_dropped += records.size();
        }
    }
    // groups is an ordered map, so the output is already sorted.
    return canonical;
}

namespace {

std::string bool_field(bool b) { return b ? "1" : "0"; }

std::string opt_double_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

std::string opt_bool_field(const std::optional<bool>& v) {
    return v ? bool_field(*v) : std::string{};
}

}  // namespace

std::string households_csv(std::span<const VillageDataset> villages) {
    std::string out =
        "village_id,household_id,sampled,caste_group,landholding_acres,asset_brick,"
        "asset_townhouse,asset_palang,asset_tractor,asset_auto,main_occupation,heritage\n";
    for (const auto& v : villages) {
        for (const auto& [id, h] : v.households) {
            out += csv::join_row({v.village_id, h.household_id, bool_field(h.sampled),
                                  to_token(h.caste), opt_double_field(h.landholding_acres),
                                  bool_field(h.assets.brick_house), bool_field(h.assets.town_house),
                                  bool_field(h.assets.palang), bool_field(h.assets.tractor),
                                  bool_field(h.assets.automobile), to_token(h.occupation),
                                  opt_bool_field(h.heritage)});
        }
    }
    return out;
}

std::string links_csv(std::span<const VillageDataset> villages) {
    std::string out = "village_id,receiver_id,provider_id,service_kind,reporter_id\n";
    for (const auto& v : villages) {
        for (const auto& l : v.links) {
            out += csv::join_row({v.village_id, l.receiver, l.provider, l.kind, l.reporter});
        }
    }
    return out;
}

std::string members_csv(std::span<const VillageDataset> villages) {
    std::string out = "village_id,household_id,age,gender,studying,activity\n";
    for (const auto& v : villages) {
        for (const auto& [id, h] : v.households) {
            for (const auto& m : h.members) {
                out += csv::join_row({v.village_id, h.household_id, std::to_string(m.age),
                                      to_token(m.gender), bool_field(m.studying),
                                      to_token(m.activity)});
            }
        }
    }
    return out;
}

}  // namespace patronnet
