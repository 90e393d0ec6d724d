#include "patronnet/stats.hpp"

#include <cmath>

#include "doctest.h"
#include "../helpers.hpp"

using namespace patronnet;

TEST_CASE("welch_t_test on identical samples gives t = 0, p = 1 exactly") {
    std::vector<double> a{0, 0, 1, 1, 2};
    auto w = welch_t_test(a, a);
    CHECK(w.t == 0.0);
    CHECK(w.p == 1.0);
    CHECK(!w.degenerate);
}

TEST_CASE("welch_t_test matches the textbook oracle") {
    std::vector<double> a{0, 0, 1, 1, 0, 1, 1, 1};
    std::vector<double> b{1, 1, 1, 0, 1, 1};
    auto w = welch_t_test(a, b);
    auto o = testhelp::welch_oracle(a, b);
    CHECK(std::fabs(w.t - static_cast<double>(o.t)) <= 1e-10 * std::fabs(static_cast<double>(o.t)));
    CHECK(std::fabs(w.df - static_cast<double>(o.df)) <= 1e-10 * static_cast<double>(o.df));
    CHECK(std::fabs(w.p - static_cast<double>(o.p)) <= 1e-10 * static_cast<double>(o.p));
}

TEST_CASE("welch_t_test handles degenerate and separated constants") {
    std::vector<double> ones{1, 1, 1};
    std::vector<double> zeros{0, 0, 0, 0};
    auto degenerate = welch_t_test(ones, ones);
    CHECK(degenerate.degenerate);
    CHECK(significance_from_p(degenerate.p, degenerate.degenerate) ==
          Significance::NotSignificant);

    auto separated = welch_t_test(ones, zeros);
    CHECK(!separated.degenerate);
    CHECK(separated.p == 0.0);
    CHECK(significance_from_p(separated.p, separated.degenerate) == Significance::OnePercent);
}

TEST_CASE("welch_t_test requires two observations per sample") {
    std::vector<double> one{1.0};
    std::vector<double> two{1.0, 2.0};
    CHECK_THROWS_AS(welch_t_test(one, two), InsufficientData);
    CHECK_THROWS_AS(welch_t_test(two, one), InsufficientData);
}

TEST_CASE("welch_t_test is symmetric up to sign and scale invariant") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> a, b;
        std::size_t na = 5 + rng.below(20);
        std::size_t nb = 5 + rng.below(20);
        for (std::size_t i = 0; i < na; ++i) a.push_back(rng.unit() * 3.0);
        for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.unit() * 3.0 + 0.2);

        auto ab = welch_t_test(a, b);
        auto ba = welch_t_test(b, a);
        CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));

        std::vector<double> a2 = a, b2 = b;
        for (auto& x : a2) x *= 7.5;
        for (auto& x : b2) x *= 7.5;
        auto scaled = welch_t_test(a2, b2);
        CHECK(scaled.t == doctest::Approx(ab.t).epsilon(1e-9));
        CHECK(scaled.p == doctest::Approx(ab.p).epsilon(1e-9));
    }
}

TEST_CASE("welch p keeps full precision for tiny and for large t") {
    auto rel = [](double x, long double y) {
        return std::fabs(x - static_cast<double>(y)) / static_cast<double>(y);
    };
    // nearly identical samples: t ~ 1e-8, p just under 1
    std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> b{1.0, 2.0, 3.0, 4.0, 5.0 + 1e-7};
    auto w = welch_t_test(a, b);
    auto o = testhelp::welch_oracle(a, b);
    CHECK(w.p < 1.0);
    CHECK(w.p > 0.999999);
    CHECK(rel(w.p, o.p) <= 1e-10);

    // well-separated samples: small p, still within the oracle's reach
    std::vector<double> c{0.1, 0.4, 0.2, 0.3, 0.25, 0.15, 0.35, 0.3};
    std::vector<double> d{1.1, 1.4, 1.2, 1.3, 1.25, 1.15, 1.35, 1.3};
    auto w2 = welch_t_test(c, d);
    auto o2 = testhelp::welch_oracle(c, d);
    CHECK(w2.p < 1e-3);
    CHECK(rel(w2.p, o2.p) <= 1e-10);
    CHECK(rel(w2.t, o2.t) <= 1e-12);
    CHECK(rel(w2.df, o2.df) <= 1e-12);
}

TEST_CASE("regularized incomplete beta hits known values") {
    // p for |t|=1 with df=1 is exactly 0.5 (the Cauchy case)
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
    // I_x(1, 1) = x
    CHECK(regularized_incomplete_beta(1, 1, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
}

namespace {

VillageDataset separation_village(const std::string& id, int n, int elite_dependents) {
    VillageDataset v;
    v.village_id = id;
    for (int i = 0; i <= n; ++i) {
        HouseholdRecord h;
        h.household_id = i == 0 ? "E" : "H" + std::to_string(i);
        h.village_id = id;
        h.caste = i == 0 ? CasteGroup::UpperOrGeneral : CasteGroup::ScSt;
        h.landholding_acres = i == 0 ? 4.0 : 0.5;
        h.occupation = i == 0 ? Occupation::Business : Occupation::Farming;
        h.heritage = (i == 0);
        if (i == 0) h.assets = AssetFlags{true, true, true, false, false};
        v.households.emplace(h.household_id, std::move(h));
    }
    for (int i = 1; i <= elite_dependents; ++i) {
        v.links.push_back({"H" + std::to_string(i), "E", "sale_output", "H" + std::to_string(i)});
    }
    std::sort(v.links.begin(), v.links.end());
    return v;
}

}  // namespace

TEST_CASE("elite_nonelite_table separates planted elites from the rest") {
    auto taxonomy = ServiceTaxonomy::builtin();
    std::vector<VillageDataset> datasets{separation_village("A", 20, 3),
                                         separation_village("B", 20, 4)};
    std::vector<VillageClassification> classifications;
    for (const auto& d : datasets) {
        classifications.push_back(analyze_village(d, taxonomy, Threshold{}).classification);
        REQUIRE(classifications.back().elites.size() == 1);
    }
    auto table = elite_nonelite_table(datasets, classifications);
    REQUIRE(table.rows.size() == 5);
    CHECK(table.rows[0].variable == "upper_caste");
    CHECK(table.rows[1].variable == "landholding");
    CHECK(table.rows[2].variable == "wealth_index");
    CHECK(table.rows[3].variable == "stable_occupation");
    CHECK(table.rows[4].variable == "heritage");

    // elites all upper caste, non-elites none
    CHECK(table.rows[0].mean_elites == 1.0);
    CHECK(table.rows[0].mean_non_elites == 0.0);
    CHECK(table.rows[0].significance == Significance::OnePercent);
    CHECK(table.rows[0].n_elites == 2);
    CHECK(table.rows[0].n_non_elites == 40);

    // acreage means surface separately from the dummy
    CHECK(table.landholding_acres.variable == "landholding_acres");
    CHECK(table.landholding_acres.mean_elites == 4.0);
    CHECK(table.landholding_acres.mean_non_elites == 0.5);
}

TEST_CASE("per-variable missing data shrinks that variable's N only") {
    auto taxonomy = ServiceTaxonomy::builtin();
    auto d = separation_village("A", 20, 3);
    d.households.at("H5").heritage.reset();
    d.households.at("H6").heritage.reset();
    d.households.at("H7").landholding_acres.reset();
    std::vector<VillageDataset> datasets{d};
    std::vector<VillageClassification> classifications{
        analyze_village(d, taxonomy, Threshold{}).classification};
    auto table = elite_nonelite_table(datasets, classifications);
    CHECK(table.rows[4].n_non_elites == 18);  // heritage
    CHECK(table.rows[1].n_non_elites == 19);  // landholding dummy
    CHECK(table.rows[2].n_non_elites == 20);  // wealth index never missing
}

TEST_CASE("patronage cells follow the service catalog") {
    CHECK(patronage_cell({"e", {"rent_out_land", "helps_gov_schemes", "mediates_family_disputes"}}) ==
          PatronageCell::AllThree);
    CHECK(patronage_cell({"e", {"rural_business"}}) == PatronageCell::OnlyEconomic);
    CHECK(patronage_cell({"e", {}}) == PatronageCell::None);
    CHECK(patronage_cell({"e", {"political_advice", "religious_advice"}}) ==
          PatronageCell::PoliticalSocial);
    CHECK_THROWS_AS(patronage_cell({"e", {"alchemy"}}), UnknownServiceKind);
}

TEST_CASE("patronage_pattern partitions profiles exhaustively") {
    Rng rng(37);
    std::vector<std::string> keys;
    for (const auto& [key, cls] : elite_service_catalog()) keys.push_back(key);
    REQUIRE(keys.size() == 13);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<EliteServiceProfile> profiles;
        std::size_t n = 1 + rng.below(40);
        for (std::size_t i = 0; i < n; ++i) {
            EliteServiceProfile p;
            p.elite_id = "E" + std::to_string(i);
            for (const auto& key : keys) {
                if (rng.unit() < 0.25) p.services.insert(key);
            }
            profiles.push_back(std::move(p));
        }
        auto pattern = patronage_pattern(profiles);
        CHECK(pattern.counts.size() == 8);
        std::size_t total = 0;
        double percent_sum = 0;
        for (const auto& [cell, count] : pattern.counts) {
            total += count;
            percent_sum += pattern.percent(cell);
        }
        CHECK(total == profiles.size());
        CHECK(percent_sum == doctest::Approx(100.0).epsilon(1e-4));
    }
}

TEST_CASE("elite service profiles load from CSV with unknown keys rejected") {
    ValidationReport report;
    auto profiles = load_elite_services_csv(testhelp::fixture("elite_services.csv"), &report);
    REQUIRE(profiles.size() == 4);
    REQUIRE(report.rejects.size() == 1);
    CHECK(report.rejects[0].reason.find("flying_lessons") != std::string::npos);

    auto pattern = patronage_pattern(profiles);
    CHECK(pattern.counts.at(PatronageCell::AllThree) == 1);       // E1
    CHECK(pattern.counts.at(PatronageCell::OnlyEconomic) == 1);   // E2
    CHECK(pattern.counts.at(PatronageCell::EconPolitical) == 1);  // E3
    CHECK(pattern.counts.at(PatronageCell::OnlySocial) == 1);     // E4
    CHECK(pattern.counts.at(PatronageCell::None) == 0);
}

TEST_CASE("occupation_split on an all-farming roster puts 1.0 in every populated row") {
    std::vector<Member> members{{25, Gender::Male, false, Activity::Farming},
                                {55, Gender::Female, false, Activity::Farming}};
    auto rows = occupation_split(members);
    REQUIRE(rows.size() == 4);  // male_18_40, all_18_40, female_over_40, all_over_40
    for (const auto& row : rows) {
        CHECK(row.farming == 1.0);
        CHECK(row.business_salaried == 0.0);
    }
}

TEST_CASE("occupation_split of an empty roster is empty") {
    CHECK(occupation_split({}).empty());
}

TEST_CASE("occupation_split matches the hand-counted ten-member fixture") {
    auto ingest = ingest_survey(testhelp::fixture("villages3/households.csv"),
                                testhelp::fixture("villages3/links.csv"),
                                ServiceTaxonomy::builtin(),
                                testhelp::fixture("villages3/members.csv"));
    const auto& members = ingest.villages[0].households.at("H01").members;
    REQUIRE(members.size() == 10);
    auto rows = occupation_split(members);
    REQUIRE(rows.size() == 6);

    auto row = [&](const std::string& label) {
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const OccupationRow& r) { return r.label == label; });
        REQUIRE(it != rows.end());
        return *it;
    };
    auto m1840 = row("male_18_40");
    CHECK(m1840.n == 3);  // ages 30, 35, 40 (40 lands in the younger band)
    CHECK(m1840.farming == doctest::Approx(2.0 / 3.0));
    CHECK(m1840.business_salaried == doctest::Approx(1.0 / 3.0));
    CHECK(m1840.manual_low == 0.0);

    auto f1840 = row("female_18_40");
    CHECK(f1840.n == 2);
    CHECK(f1840.business_salaried == doctest::Approx(0.5));
    CHECK(f1840.manual_low == doctest::Approx(0.5));

    auto all_young = row("all_18_40");
    CHECK(all_young.n == 5);
    CHECK(all_young.farming == doctest::Approx(0.4));

    auto m40 = row("male_over_40");
    CHECK(m40.n == 2);
    CHECK(m40.farming == doctest::Approx(0.5));
    CHECK(m40.manual_low == doctest::Approx(0.5));

    CHECK(row("female_over_40").farming == 1.0);
    auto all_old = row("all_over_40");
    CHECK(all_old.n == 3);
    CHECK(all_old.farming == doctest::Approx(2.0 / 3.0));
    CHECK(all_old.manual_low == doctest::Approx(1.0 / 3.0));

    // each populated row's proportions sum to one
    for (const auto& r : rows) {
        CHECK(r.farming + r.business_salaried + r.manual_low == doctest::Approx(1.0));
    }
}

TEST_CASE("village_summary totals and per-state breakdown") {
    CHECK(village_summary({}).villages == 0);

    auto ingest = ingest_survey(testhelp::fixture("villages3/households.csv"),
                                testhelp::fixture("villages3/links.csv"),
                                ServiceTaxonomy::builtin());
    auto taxonomy = ServiceTaxonomy::builtin();
    std::vector<VillageClassification> classifications;
    for (const auto& d : ingest.villages) {
        classifications.push_back(analyze_village(d, taxonomy, Threshold{}).classification);
    }
    auto states = load_village_states_csv(testhelp::fixture("village_states.csv"));
    auto summary = village_summary(classifications, states);

    CHECK(summary.villages == 3);
    CHECK(summary.elite_villages == 2);       // V1 and V3
    CHECK(summary.non_elite_villages == 1);   // V2
    CHECK(summary.elites == 5);               // 1 in V1, 4 in V3
    CHECK(summary.clients == 6);              // 4 in V1, 2 in V3
    CHECK(summary.non_clients == 19);         // 7 + 8 + 4

    REQUIRE(summary.by_state.size() == 3);
    auto up = std::find_if(summary.by_state.begin(), summary.by_state.end(),
                           [](const StateSummary& s) { return s.state == "EasternUP"; });
    REQUIRE(up != summary.by_state.end());
    CHECK(up->villages == 1);
    CHECK(up->elite_villages == 1);
    CHECK(up->elites == 1);
    CHECK(up->clients == 4);
}

TEST_CASE("text renderers produce aligned non-empty tables") {
    ComparisonTable table;
    table.rows.push_back({"upper_caste", 1.0, 0.25, Significance::OnePercent, false, 4, 40});
    table.landholding_acres = {"landholding_acres", 3.2, 0.4, Significance::FivePercent, false, 4, 40};
    auto text = comparison_table_text(table);
    CHECK(text.find("upper_caste") != std::string::npos);
    CHECK(text.find("1%") != std::string::npos);

    PatronagePattern pattern = patronage_pattern({});
    CHECK(patronage_pattern_text(pattern).find("cell") != std::string::npos);
}
