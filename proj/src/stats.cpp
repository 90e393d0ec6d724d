#include "patronnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "patronnet/csv.hpp"
#include "patronnet/util.hpp"

namespace patronnet {

namespace {

// Continued-fraction evaluation of the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

namespace {

// x and cx are the argument and its complement, both computed exactly by
// the caller; passing cx separately keeps precision when x is near 1.
double incomplete_beta_with_complement(double a, double b, double x, double cx) {
    if (x <= 0.0) return 0.0;
    if (cx <= 0.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(cx);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, cx) / b;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    return incomplete_beta_with_complement(a, b, x, 1.0 - x);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientData("welch_t_test: both samples need at least 2 observations");
    }
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    double ma = mean_of(a);
    double mb = mean_of(b);
    double va = sample_variance(a, ma);
    double vb = sample_variance(b, mb);

    WelchResult result;
    if (va == 0.0 && vb == 0.0) {
        if (ma == mb) {
            result.degenerate = true;  // two equal constants, statistic undefined
        } else {
            // perfect separation: zero pooled error with distinct means
            result.t = ma > mb ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
            result.p = 0.0;
        }
        return result;
    }
    double sa = va / na;
    double sb = vb / nb;
    result.t = (ma - mb) / std::sqrt(sa + sb);
    result.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    if (result.t == 0.0) {
        result.p = 1.0;
    } else {
        double t2 = result.t * result.t;
        result.p = incomplete_beta_with_complement(result.df / 2.0, 0.5,
                                                   result.df / (result.df + t2),
                                                   t2 / (result.df + t2));
    }
    return result;
}

const char* to_string(Significance s) {
    switch (s) {
        case Significance::OnePercent: return "1%";
        case Significance::FivePercent: return "5%";
        case Significance::TenPercent: return "10%";
        case Significance::NotSignificant: return "n.s.";
    }
    return "?";
}

Significance significance_from_p(double p, bool degenerate) {
    if (degenerate) return Significance::NotSignificant;
    if (p <= 0.01) return Significance::OnePercent;
    if (p <= 0.05) return Significance::FivePercent;
    if (p <= 0.10) return Significance::TenPercent;
    return Significance::NotSignificant;
}

namespace {

ComparisonRow compare_variable(const std::string& name, const std::vector<double>& elites,
                               const std::vector<double>& non_elites) {
    ComparisonRow row;
    row.variable = name;
    row.n_elites = elites.size();
    row.n_non_elites = non_elites.size();
    row.mean_elites = elites.empty() ? 0.0 : mean_of(elites);
    row.mean_non_elites = non_elites.empty() ? 0.0 : mean_of(non_elites);
    try {
        WelchResult w = welch_t_test(elites, non_elites);
        row.degenerate = w.degenerate;
        row.significance = significance_from_p(w.p, w.degenerate);
    } catch (const InsufficientData&) {
        row.degenerate = true;
        row.significance = Significance::NotSignificant;
    }
    return row;
}

}  // namespace

ComparisonTable elite_nonelite_table(std::span<const VillageDataset> datasets,
                                     std::span<const VillageClassification> classifications) {
    std::map<std::string, std::set<std::string>> elite_ids_by_village;
    for (const auto& c : classifications) {
        auto& ids = elite_ids_by_village[c.village_id];
        for (const auto& e : c.elites) ids.insert(e.id);
    }

    // Column vectors per variable with per-variable missing deletion.
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> columns;
    auto push = [&](const std::string& var, bool elite, std::optional<double> value) {
        if (!value) return;
        auto& [e, ne] = columns[var];
        (elite ? e : ne).push_back(*value);
    };

    for (const auto& dataset : datasets) {
        auto eit = elite_ids_by_village.find(dataset.village_id);
        const std::set<std::string>* elite_ids = eit == elite_ids_by_village.end() ? nullptr : &eit->second;
        for (const auto& [id, h] : dataset.households) {
            bool is_elite = elite_ids && elite_ids->count(id);
            if (!is_elite && !h.sampled) continue;  // only the elite survey reaches beyond the sample
            DummyRecord d = derive_dummies(h);
            push("upper_caste", is_elite, static_cast<double>(d.upper_caste));
            push("landholding", is_elite,
                 d.landholding_ge_1acre ? std::optional<double>(*d.landholding_ge_1acre) : std::nullopt);
            push("wealth_index", is_elite, static_cast<double>(wealth_index(h)));
            push("stable_occupation", is_elite, static_cast<double>(d.stable_occupation));
            push("heritage", is_elite, d.heritage ? std::optional<double>(*d.heritage) : std::nullopt);
            push("landholding_acres", is_elite, h.landholding_acres);
        }
    }

    ComparisonTable table;
    for (const char* var :
         {"upper_caste", "landholding", "wealth_index", "stable_occupation", "heritage"}) {
        auto& [e, ne] = columns[var];
        table.rows.push_back(compare_variable(var, e, ne));
    }
    auto& [e, ne] = columns["landholding_acres"];
    table.landholding_acres = compare_variable("landholding_acres", e, ne);
    return table;
}

const std::map<std::string, EliteServiceClass>& elite_service_catalog() {
    using enum EliteServiceClass;
    static const std::map<std::string, EliteServiceClass> catalog{
        {"rent_out_land", Economic},
        {"rent_out_inputs", Economic},
        {"provides_employment", Economic},
        {"lends_money", Economic},
        {"rural_business", Economic},
        {"helps_gov_schemes", Political},
        {"political_advice", Political},
        {"organizes_rallies", Political},
        {"mediates_administration", Political},
        {"mediates_occupation_disputes", Political},
        {"mediates_family_disputes", Social},
        {"organizes_events", Social},
        {"religious_advice", Social},
    };
    return catalog;
}

const char* to_string(PatronageCell c) {
    switch (c) {
        case PatronageCell::AllThree: return "E+P+S";
        case PatronageCell::EconPolitical: return "E+P, not S";
        case PatronageCell::EconSocial: return "E+S, not P";
        case PatronageCell::PoliticalSocial: return "P+S, not E";
        case PatronageCell::OnlyEconomic: return "only E";
        case PatronageCell::OnlyPolitical: return "only P";
        case PatronageCell::OnlySocial: return "only S";
        case PatronageCell::None: return "none";
    }
    return "?";
}

PatronageCell patronage_cell(const EliteServiceProfile& profile) {
    const auto& catalog = elite_service_catalog();
    bool e = false, p = false, s = false;
    for (const auto& key : profile.services) {
        auto it = catalog.find(key);
        if (it == catalog.end()) throw UnknownServiceKind(key);
        switch (it->second) {
            case EliteServiceClass::Economic: e = true; break;
            case EliteServiceClass::Political: p = true; break;
            case EliteServiceClass::Social: s = true; break;
        }
    }
    if (e && p && s) return PatronageCell::AllThree;
    if (e && p) return PatronageCell::EconPolitical;
    if (e && s) return PatronageCell::EconSocial;
    if (p && s) return PatronageCell::PoliticalSocial;
    if (e) return PatronageCell::OnlyEconomic;
    if (p) return PatronageCell::OnlyPolitical;
    if (s) return PatronageCell::OnlySocial;
    return PatronageCell::None;
}

double PatronagePattern::percent(PatronageCell c) const {
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(counts.at(c)) / static_cast<double>(total);
}

PatronagePattern patronage_pattern(std::span<const EliteServiceProfile> profiles) {
    PatronagePattern pattern;
    for (auto c : {PatronageCell::AllThree, PatronageCell::EconPolitical, PatronageCell::EconSocial,
                   PatronageCell::PoliticalSocial, PatronageCell::OnlyEconomic,
                   PatronageCell::OnlyPolitical, PatronageCell::OnlySocial, PatronageCell::None}) {
        pattern.counts[c] = 0;
    }
    for (const auto& profile : profiles) {
        ++pattern.counts[patronage_cell(profile)];
        ++pattern.total;
    }
    return pattern;
}

std::vector<EliteServiceProfile> load_elite_services_csv(const std::filesystem::path& path,
                                                         ValidationReport* report) {
    csv::Table table = csv::read_file(path);
    csv::Columns cols(table, {"elite_id", "service_key"}, path.filename().string());
    std::map<std::string, EliteServiceProfile> profiles;
    for (const auto& row : table.rows) {
        const std::string& id = cols.get(row, "elite_id");
        const std::string& key = cols.get(row, "service_key");
        if (!elite_service_catalog().count(key)) {
            if (report) {
                report->rejects.push_back(
                    {path.filename().string(), row.line, "unknown elite service key: " + key});
            }
            continue;
        }
        auto& profile = profiles[id];
        profile.elite_id = id;
        profile.services.insert(key);
    }
    std::vector<EliteServiceProfile> out;
    out.reserve(profiles.size());
    for (auto& [id, profile] : profiles) out.push_back(std::move(profile));
    return out;
}

std::vector<OccupationRow> occupation_split(std::span<const Member> members) {
    struct Cell {
        std::size_t n = 0;
        std::size_t farming = 0;
        std::size_t business = 0;
        std::size_t manual = 0;
    };
    // young = 18..40 inclusive, old = over 40; columns 0/1 by gender, 2 = all
    Cell cells[2][3];
    for (const auto& m : members) {
        if (m.studying || m.age < 18) continue;
        int band = m.age <= 40 ? 0 : 1;
        auto tally = [&](Cell& cell) {
            ++cell.n;
            switch (m.activity) {
                case Activity::Farming: ++cell.farming; break;
                case Activity::BusinessSalariedHighSkill: ++cell.business; break;
                case Activity::ManualLowSkill: ++cell.manual; break;
            }
        };
        if (m.gender == Gender::Male) tally(cells[band][0]);
        if (m.gender == Gender::Female) tally(cells[band][1]);
        tally(cells[band][2]);
    }

    const char* labels[2][3] = {{"male_18_40", "female_18_40", "all_18_40"},
                                {"male_over_40", "female_over_40", "all_over_40"}};
    std::vector<OccupationRow> rows;
    for (int band = 0; band < 2; ++band) {
        for (int g = 0; g < 3; ++g) {
            const Cell& cell = cells[band][g];
            if (cell.n == 0) continue;
            OccupationRow row;
            row.label = labels[band][g];
            row.n = cell.n;
            double n = static_cast<double>(cell.n);
            row.farming = static_cast<double>(cell.farming) / n;
            row.business_salaried = static_cast<double>(cell.business) / n;
            row.manual_low = static_cast<double>(cell.manual) / n;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

VillageSummary village_summary(std::span<const VillageClassification> classifications,
                               const std::map<std::string, std::string>& village_state) {
    VillageSummary summary;
    std::map<std::string, StateSummary> states;
    for (const auto& c : classifications) {
        ++summary.villages;
        if (c.elite_village()) {
            ++summary.elite_villages;
        } else {
            ++summary.non_elite_villages;
        }
        summary.elites += c.elites.size();
        summary.clients += c.clients.size();
        summary.non_clients += c.non_clients.size();

        auto sit = village_state.find(c.village_id);
        std::string state = sit == village_state.end() ? "unassigned" : sit->second;
        auto& s = states[state];
        s.state = state;
        ++s.villages;
        if (c.elite_village()) ++s.elite_villages;
        s.elites += c.elites.size();
        s.clients += c.clients.size();
    }
    for (auto& [name, s] : states) summary.by_state.push_back(std::move(s));
    return summary;
}

std::map<std::string, std::string> load_village_states_csv(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    csv::Columns cols(table, {"village_id", "state"}, path.filename().string());
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows) {
        out[cols.get(row, "village_id")] = cols.get(row, "state");
    }
    return out;
}

// --- renderers ---

namespace {

nlohmann::json comparison_row_json(const ComparisonRow& row) {
    return nlohmann::json{{"variable", row.variable},
                          {"mean_elites", row.mean_elites},
                          {"mean_non_elites", row.mean_non_elites},
                          {"significance", to_string(row.significance)},
                          {"degenerate", row.degenerate},
                          {"n_elites", row.n_elites},
                          {"n_non_elites", row.n_non_elites}};
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string fixed3(double v) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(3);
    ss << v;
    return ss.str();
}

std::string fixed2(double v) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(2);
    ss << v;
    return ss.str();
}

}  // namespace

nlohmann::json comparison_table_json(const ComparisonTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) rows.push_back(comparison_row_json(row));
    return nlohmann::json{{"rows", rows},
                          {"landholding_acres", comparison_row_json(table.landholding_acres)}};
}

nlohmann::json patronage_pattern_json(const PatronagePattern& pattern) {
    nlohmann::json cells = nlohmann::json::array();
    double percent_sum = 0;
    for (const auto& [cell, count] : pattern.counts) {
        double pct = pattern.percent(cell);
        percent_sum += pct;
        cells.push_back({{"cell", to_string(cell)}, {"count", count}, {"percent", pct}});
    }
    return nlohmann::json{
        {"cells", cells}, {"total_profiles", pattern.total}, {"percent_sum", percent_sum}};
}

nlohmann::json occupation_rows_json(std::span<const OccupationRow> rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        out.push_back({{"group", row.label},
                       {"n", row.n},
                       {"farming", row.farming},
                       {"business_salaried_highskill", row.business_salaried},
                       {"manual_lowskill", row.manual_low}});
    }
    return nlohmann::json{{"rows", out}};
}

nlohmann::json village_summary_json(const VillageSummary& summary) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : summary.by_state) {
        states.push_back({{"state", s.state},
                          {"villages", s.villages},
                          {"elite_villages", s.elite_villages},
                          {"elites", s.elites},
                          {"clients", s.clients}});
    }
    return nlohmann::json{{"villages", summary.villages},
                          {"elite_villages", summary.elite_villages},
                          {"non_elite_villages", summary.non_elite_villages},
                          {"elites", summary.elites},
                          {"clients", summary.clients},
                          {"non_clients", summary.non_clients},
                          {"by_state", states}};
}

std::string comparison_table_text(const ComparisonTable& table) {
    std::string out = "Elite vs non-elite household means\n";
    out += pad("variable", 20) + lpad("elites", 10) + lpad("non-elites", 12) +
           lpad("signif", 8) + lpad("N(e)", 7) + lpad("N(ne)", 7) + "\n";
    auto line = [&](const ComparisonRow& row) {
        out += pad(row.variable, 20) + lpad(fixed3(row.mean_elites), 10) +
               lpad(fixed3(row.mean_non_elites), 12) + lpad(to_string(row.significance), 8) +
               lpad(std::to_string(row.n_elites), 7) + lpad(std::to_string(row.n_non_elites), 7) +
               "\n";
    };
    for (const auto& row : table.rows) line(row);
    out += "(acreage, not the dummy)\n";
    line(table.landholding_acres);
    return out;
}

std::string patronage_pattern_text(const PatronagePattern& pattern) {
    std::string out = "Pattern of patronage service provision\n";
    out += pad("cell", 14) + lpad("count", 7) + lpad("percent", 10) + "\n";
    for (const auto& [cell, count] : pattern.counts) {
        out += pad(to_string(cell), 14) + lpad(std::to_string(count), 7) +
               lpad(fixed2(pattern.percent(cell)), 10) + "\n";
    }
    out += "profiles: " + std::to_string(pattern.total) + "\n";
    return out;
}

std::string occupation_rows_text(std::span<const OccupationRow> rows) {
    std::string out = "Occupation of non-studying adults by gender and age band\n";
    out += pad("group", 16) + lpad("n", 6) + lpad("farming", 10) + lpad("bus/sal", 10) +
           lpad("manual", 10) + "\n";
    for (const auto& row : rows) {
        out += pad(row.label, 16) + lpad(std::to_string(row.n), 6) + lpad(fixed2(row.farming), 10) +
               lpad(fixed2(row.business_salaried), 10) + lpad(fixed2(row.manual_low), 10) + "\n";
    }
    return out;
}

std::string village_summary_text(const VillageSummary& summary) {
    std::string out = "Village summary\n";
    out += "villages: " + std::to_string(summary.villages) + "\n";
    out += "elite villages: " + std::to_string(summary.elite_villages) + "\n";
    out += "non-elite villages: " + std::to_string(summary.non_elite_villages) + "\n";
    out += "elites: " + std::to_string(summary.elites) + "\n";
    out += "clients: " + std::to_string(summary.clients) + "\n";
    out += "non-clients: " + std::to_string(summary.non_clients) + "\n";
    for (const auto& s : summary.by_state) {
        out += "  " + pad(s.state, 14) + " villages=" + std::to_string(s.villages) +
               " elite_villages=" + std::to_string(s.elite_villages) +
               " elites=" + std::to_string(s.elites) + " clients=" + std::to_string(s.clients) + "\n";
    }
    return out;
}

}  // namespace patronnet
