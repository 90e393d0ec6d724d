#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace patronnet {

enum class Sphere { Economic, Social, Political };
enum class Cruciality { Crucial, NonCrucial };

const char* to_string(Sphere s);
const char* to_string(Cruciality c);
Sphere sphere_from_token(const std::string& token);         // throws std::invalid_argument
Cruciality cruciality_from_token(const std::string& token);  // throws std::invalid_argument

struct ServiceCategory {
    Sphere sphere;
    Cruciality cruciality;

    bool operator==(const ServiceCategory&) const = default;
};

struct UnknownServiceKind : std::runtime_error {
    explicit UnknownServiceKind(const std::string& kind)
        : std::runtime_error("unknown service kind: " + kind), kind(kind) {}
    std::string kind;
};

// Maps stable snake_case service-kind identifiers to (sphere, cruciality).
// The built-in table carries the eleven household-survey service kinds; a
// user-supplied file can replace it for sensitivity analyses.
class ServiceTaxonomy {
public:
    static ServiceTaxonomy builtin();

    // File format: one `kind,sphere,cruciality` line per service kind.
    // Blank lines and `#` comments are skipped.
    static ServiceTaxonomy load(const std::filesystem::path& path);

    ServiceCategory classify(const std::string& kind) const;  // throws UnknownServiceKind
    bool contains(const std::string& kind) const { return entries_.count(kind) != 0; }

    const std::map<std::string, ServiceCategory>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const std::string& version() const { return version_; }

    std::size_t count_by_sphere(Sphere s) const;

private:
    ServiceTaxonomy(std::map<std::string, ServiceCategory> entries, std::string version)
        : entries_(std::move(entries)), version_(std::move(version)) {}

    std::map<std::string, ServiceCategory> entries_;
    std::string version_;
};

inline ServiceCategory classify_service(const std::string& kind, const ServiceTaxonomy& taxonomy) {
    return taxonomy.classify(kind);
}

}  // namespace patronnet
