#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "patronnet/dependence.hpp"
#include "patronnet/ingest.hpp"
#include "patronnet/survey.hpp"

namespace patronnet {

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WelchResult {
    double t = 0;
    double df = 0;
    double p = 1;
    bool degenerate = false;  // a zero-variance group; statistic unusable
};

// Unequal-variance two-sample t statistic with Welch-Satterthwaite degrees
// of freedom; two-sided p from the regularized incomplete beta function.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b), relative error <= 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

enum class Significance { OnePercent, FivePercent, TenPercent, NotSignificant };

const char* to_string(Significance s);
Significance significance_from_p(double p, bool degenerate);

struct ComparisonRow {
    std::string variable;
    double mean_elites = 0;
    double mean_non_elites = 0;
    Significance significance = Significance::NotSignificant;
    bool degenerate = false;
    std::size_t n_elites = 0;
    std::size_t n_non_elites = 0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // the five dummy/index variables
    // Acreage means reported separately from the landholding dummy, since
    // the two are easy to conflate.
    ComparisonRow landholding_acres;
};

// Elite vs non-elite means with per-variable missing-data deletion. The
// elite group is every household record classified elite (sampled or not);
// non-elites are the remaining sampled households.
ComparisonTable elite_nonelite_table(std::span<const VillageDataset> datasets,
                                     std::span<const VillageClassification> classifications);

// --- patronage-service partition ---

enum class EliteServiceClass { Economic, Political, Social };

// The elite-survey service list: each key maps to E, P or S.
const std::map<std::string, EliteServiceClass>& elite_service_catalog();

struct EliteServiceProfile {
    std::string elite_id;
    std::set<std::string> services;  // keys from the catalog
};

enum class PatronageCell {
    AllThree,        // at least one item from each of E, P and S
    EconPolitical,   // E and P but not S
    EconSocial,      // E and S but not P
    PoliticalSocial, // P and S but not E
    OnlyEconomic,
    OnlyPolitical,
    OnlySocial,
    None,
};

const char* to_string(PatronageCell c);
PatronageCell patronage_cell(const EliteServiceProfile& profile);

struct PatronagePattern {
    std::map<PatronageCell, std::size_t> counts;  // every cell present
    std::size_t total = 0;

    double percent(PatronageCell c) const;
};

PatronagePattern patronage_pattern(std::span<const EliteServiceProfile> profiles);

// elite_services.csv: elite_id, service_key. Unknown keys are rejected and
// reported, not dropped silently.
std::vector<EliteServiceProfile> load_elite_services_csv(const std::filesystem::path& path,
                                                         ValidationReport* report = nullptr);

// --- occupation by age band and gender ---

struct OccupationRow {
    std::string label;  // e.g. "male_18_40"
    std::size_t n = 0;
    double farming = 0;
    double business_salaried = 0;
    double manual_low = 0;
};

// Row-wise activity proportions over non-studying adults, split by gender
// and the 18-40 / over-40 age bands (the boundary age 40 counts as young).
// Only populated demographic cells produce rows.
std::vector<OccupationRow> occupation_split(std::span<const Member> members);

// --- village-level summary ---

struct StateSummary {
    std::string state;
    std::size_t villages = 0;
    std::size_t elite_villages = 0;
    std::size_t elites = 0;
    std::size_t clients = 0;
};

struct VillageSummary {
    std::size_t villages = 0;
    std::size_t elite_villages = 0;
    std::size_t non_elite_villages = 0;
    std::size_t elites = 0;
    std::size_t clients = 0;
    std::size_t non_clients = 0;
    std::vector<StateSummary> by_state;  // sorted by state label
};

VillageSummary village_summary(std::span<const VillageClassification> classifications,
                               const std::map<std::string, std::string>& village_state = {});

std::map<std::string, std::string> load_village_states_csv(const std::filesystem::path& path);

// --- renderers ---

nlohmann::json comparison_table_json(const ComparisonTable& table);
nlohmann::json patronage_pattern_json(const PatronagePattern& pattern);
nlohmann::json occupation_rows_json(std::span<const OccupationRow> rows);
nlohmann::json village_summary_json(const VillageSummary& summary);

std::string comparison_table_text(const ComparisonTable& table);
std::string patronage_pattern_text(const PatronagePattern& pattern);
std::string occupation_rows_text(std::span<const OccupationRow> rows);
std::string village_summary_text(const VillageSummary& summary);

}  // namespace patronnet
