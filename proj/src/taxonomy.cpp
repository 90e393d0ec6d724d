#include "patronnet/taxonomy.hpp"

#include <fstream>
#include <sstream>

namespace patronnet {

const char* to_string(Sphere s) {
    switch (s) {
        case Sphere::Economic: return "economic";
        case Sphere::Social: return "social";
        case Sphere::Political: return "political";
    }
    return "?";
}

const char* to_string(Cruciality c) {
    return c == Cruciality::Crucial ? "crucial" : "non_crucial";
}

Sphere sphere_from_token(const std::string& token) {
    if (token == "economic") return Sphere::Economic;
    if (token == "social") return Sphere::Social;
    if (token == "political") return Sphere::Political;
    throw std::invalid_argument("bad sphere token: " + token);
}

Cruciality cruciality_from_token(const std::string& token) {
    if (token == "crucial") return Cruciality::Crucial;
    if (token == "non_crucial") return Cruciality::NonCrucial;
    throw std::invalid_argument("bad cruciality token: " + token);
}

ServiceTaxonomy ServiceTaxonomy::builtin() {
    using enum Sphere;
    using enum Cruciality;
    std::map<std::string, ServiceCategory> entries{
        {"lease_land", {Economic, Crucial}},
        {"purchase_input", {Economic, NonCrucial}},
        {"sale_output", {Economic, Crucial}},
        {"getting_employment", {Economic, Crucial}},
        {"info_mgnregs", {Economic, NonCrucial}},
        {"bribe_welfare", {Economic, Crucial}},
        {"assistance_welfare", {Political, Crucial}},
        {"dispute_household", {Social, NonCrucial}},
        {"dispute_employment", {Social, Crucial}},
        {"guidance_political", {Political, Crucial}},
        {"guidance_religious", {Social, NonCrucial}},
    };
    return ServiceTaxonomy(std::move(entries), "builtin");
}

ServiceTaxonomy ServiceTaxonomy::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taxonomy file: " + path.string());

    std::map<std::string, ServiceCategory> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::istringstream fields(line);
        std::string kind, sphere, cruciality;
        if (!std::getline(fields, kind, ',') || !std::getline(fields, sphere, ',') ||
            !std::getline(fields, cruciality)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected kind,sphere,cruciality");
        }
        try {
            auto [it, inserted] = entries.emplace(
                kind, ServiceCategory{sphere_from_token(sphere), cruciality_from_token(cruciality)});
            if (!inserted) {
                throw std::invalid_argument("duplicate service kind: " + kind);
            }
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (entries.empty()) {
        throw std::runtime_error(path.string() + ": taxonomy has no entries");
    }
    return ServiceTaxonomy(std::move(entries), path.filename().string());
}

ServiceCategory ServiceTaxonomy::classify(const std::string& kind) const {
    auto it = entries_.find(kind);
    if (it == entries_.end()) throw UnknownServiceKind(kind);
    return it->second;
}

std::size_t ServiceTaxonomy::count_by_sphere(Sphere s) const {
    std::size_t n = 0;
    for (const auto& [kind, cat] : entries_) {
        if (cat.sphere == s) ++n;
    }
    return n;
}

}  // namespace patronnet
