#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "patronnet/survey.hpp"
#include "patronnet/taxonomy.hpp"

namespace patronnet {

// A link references a receiver that does not exist as a sampled household.
struct ReferentialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RejectedRow {
    std::string file;
    std::size_t line = 0;
    std::string reason;
};

struct ValidationReport {
    std::vector<RejectedRow> rejects;
    ReconcileStats reconcile;
    std::size_t households_read = 0;
    std::size_t links_read = 0;
    std::size_t members_read = 0;

    std::string to_text() const;
};

struct IngestResult {
    std::vector<VillageDataset> villages;  // sorted by village id
    ValidationReport report;
};

// Reads the survey CSV files into one validated dataset per village.
// Malformed rows are rejected and reported, never silently dropped; a
// missing column aborts with csv::SchemaError. Links are reconciled after
// row validation.
IngestResult ingest_survey(const std::filesystem::path& households_path,
                           const std::filesystem::path& links_path,
                           const ServiceTaxonomy& taxonomy,
                           const std::optional<std::filesystem::path>& members_path = std::nullopt);

}  // namespace patronnet
