#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace patronnet {

enum class CasteGroup { UpperOrGeneral, Obc, ScSt, Muslim, OtherMissing };
enum class Occupation { Farming, Business, Salaried, ManualLabour, Other };
enum class Gender { Male, Female, Other };

// Coarse activity classes used by the occupation-by-age/gender report.
enum class Activity { Farming, BusinessSalariedHighSkill, ManualLowSkill };

const char* to_token(CasteGroup g);
const char* to_token(Occupation o);
const char* to_token(Gender g);
const char* to_token(Activity a);
std::optional<CasteGroup> caste_from_token(const std::string& token);
std::optional<Occupation> occupation_from_token(const std::string& token);
std::optional<Gender> gender_from_token(const std::string& token);
std::optional<Activity> activity_from_token(const std::string& token);

struct Member {
    int age = 0;
    Gender gender = Gender::Other;
    bool studying = false;
    Activity activity = Activity::Farming;

    bool operator==(const Member&) const = default;
};

struct AssetFlags {
    bool brick_house = false;
    bool town_house = false;
    bool palang = false;
    bool tractor = false;
    bool automobile = false;

    bool operator==(const AssetFlags&) const = default;
};

struct HouseholdRecord {
    std::string household_id;
    std::string village_id;
    bool sampled = true;
    CasteGroup caste = CasteGroup::OtherMissing;
    std::optional<double> landholding_acres;  // missing when unreported
    AssetFlags assets;
    Occupation occupation = Occupation::Other;
    std::optional<bool> heritage;  // royal/landlord ancestry; missing when unreported
    std::vector<Member> members;

    bool operator==(const HouseholdRecord&) const = default;
};

// One reported "receiver gets `kind` from provider" assertion. The reporter
// is the surveyed household that made the claim; self-reports have
// reporter == receiver, reciprocation claims have reporter == provider.
struct ServiceLinkRecord {
    std::string receiver;
    std::string provider;
    std::string kind;
    std::string reporter;

    auto operator<=>(const ServiceLinkRecord&) const = default;
};

struct VillageDataset {
    std::string village_id;
    std::map<std::string, HouseholdRecord> households;  // keyed by household id
    std::vector<ServiceLinkRecord> links;               // canonical, sorted
    std::optional<int> n_total;                          // enumeration count if known

    std::size_t n_sampled() const;
    bool has_household(const std::string& id) const { return households.count(id) != 0; }

    bool operator==(const VillageDataset&) const = default;
};

// Count of owned non-land assets, 0..5.
int wealth_index(const HouseholdRecord& h);

struct DummyRecord {
    int upper_caste = 0;                          // Brahmin/general/OBC
    std::optional<int> landholding_ge_1acre;       // missing when acreage unreported
    int stable_occupation = 0;                    // business or salaried
    std::optional<int> heritage;                  // missing when unreported
};

DummyRecord derive_dummies(const HouseholdRecord& h);

struct ReconcileStats {
    std::size_t duplicates_collapsed = 0;
    std::size_t unconfirmed_claims_dropped = 0;
};

// Collapses duplicate reports and resolves reciprocal-claim conflicts.
// A (receiver, provider, kind) assertion survives only when the receiver
// itself reported it; claims made solely by another party are treated as
// contradicted by the receiver's survey and dropped. Idempotent.
std::vector<ServiceLinkRecord> reconcile_claims(const std::vector<ServiceLinkRecord>& raw,
                                                ReconcileStats* stats = nullptr);

// Canonical CSV export; re-ingesting the output reproduces the datasets.
std::string households_csv(std::span<const VillageDataset> villages);
std::string links_csv(std::span<const VillageDataset> villages);
std::string members_csv(std::span<const VillageDataset> villages);

}  // namespace patronnet
