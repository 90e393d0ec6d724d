#pragma once

// Test-only helpers and independent oracles. Everything here recomputes
// results straight from the definitions, separate from the library's own
// code paths, so the main implementation can be checked against it.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "patronnet/dependence.hpp"
#include "patronnet/rng.hpp"
#include "patronnet/sampling.hpp"
#include "patronnet/survey.hpp"
#include "patronnet/taxonomy.hpp"

namespace testhelp {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& name) {
    return fs::path(FIXTURE_DIR) / name;
}

// Scratch directory removed on scope exit.
struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("patronnet_test_" + tag + "_" + std::to_string(++counter) + "_" +
                std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

// --- random village generator for property tests ---

inline std::vector<std::string> taxonomy_kinds() {
    auto taxonomy = patronnet::ServiceTaxonomy::builtin();
    std::vector<std::string> kinds;
    for (const auto& [kind, cat] : taxonomy.entries()) {
        kinds.push_back(kind);
    }
    return kinds;
}

// Random village of <= max_nodes entities: sampled households plus an
// occasional outside provider; link bundles of 1..3 distinct kinds.
inline patronnet::VillageDataset random_dataset(patronnet::Rng& rng, int max_nodes = 15) {
    static const std::vector<std::string> kinds = taxonomy_kinds();
    patronnet::VillageDataset dataset;
    dataset.village_id = "R";

    int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes - 1)));
    std::vector<std::string> households;
    for (int i = 1; i <= n; ++i) {
        std::string id = "N" + std::to_string(i);
        households.push_back(id);
        patronnet::HouseholdRecord h;
        h.household_id = id;
        h.village_id = dataset.village_id;
        h.sampled = true;
        dataset.households.emplace(id, std::move(h));
    }
    std::vector<std::string> providers = households;
    if (rng.unit() < 0.5) providers.push_back("X1");  // outside entity

    std::set<patronnet::ServiceLinkRecord> links;
    for (const auto& from : households) {
        for (const auto& to : providers) {
            if (from == to) continue;
            if (rng.unit() < 0.25) {
                std::size_t bundle = 1 + rng.below(3);
                for (std::size_t b = 0; b < bundle; ++b) {
                    links.insert(patronnet::ServiceLinkRecord{
                        from, to, kinds[rng.below(kinds.size())], from});
                }
            }
        }
    }
    dataset.links.assign(links.begin(), links.end());
    return dataset;
}

// --- direct-from-definition classification oracle ---

struct OracleClassification {
    std::set<std::string> elites;
    std::set<std::string> clients;
    std::set<std::string> non_clients;
};

inline OracleClassification classify_oracle(const patronnet::VillageDataset& dataset,
                                            const patronnet::ServiceTaxonomy& taxonomy,
                                            patronnet::Threshold threshold) {
    using patronnet::Cruciality;
    using patronnet::Sphere;

    std::set<std::string> nodes;
    std::set<std::string> sampled;
    for (const auto& [id, h] : dataset.households) {
        nodes.insert(id);
        if (h.sampled) sampled.insert(id);
    }
    std::map<std::pair<std::string, std::string>, std::set<std::string>> kinds_by_pair;
    for (const auto& link : dataset.links) {
        nodes.insert(link.receiver);
        nodes.insert(link.provider);
        kinds_by_pair[{link.receiver, link.provider}].insert(link.kind);
    }

    auto has_connection = [&](const std::string& from, const std::string& to) {
        auto it = kinds_by_pair.find({from, to});
        if (it == kinds_by_pair.end() || it->second.empty()) return false;
        if (it->second.size() == 1) {
            return taxonomy.classify(*it->second.begin()).cruciality == Cruciality::Crucial;
        }
        return true;  // two or more links always form a connection (same or mixed sphere)
    };
    auto dependent = [&](const std::string& m, const std::string& n) {
        return has_connection(m, n) && !has_connection(n, m);
    };

    OracleClassification oracle;
    std::size_t n_sampled = sampled.size();
    for (const auto& x : nodes) {
        std::size_t count = 0;
        for (const auto& m : sampled) {
            if (m != x && dependent(m, x)) ++count;
        }
        if (static_cast<std::int64_t>(count) * threshold.den >
            threshold.num * static_cast<std::int64_t>(n_sampled)) {
            oracle.elites.insert(x);
        }
    }
    for (const auto& m : sampled) {
        if (oracle.elites.count(m)) continue;
        bool client = false;
        for (const auto& e : oracle.elites) {
            if (m != e && dependent(m, e)) {
                client = true;
                break;
            }
        }
        (client ? oracle.clients : oracle.non_clients).insert(m);
    }
    return oracle;
}

// --- exhaustive directed-cycle oracle ---

inline std::set<std::vector<std::string>> cycles_oracle(const patronnet::DependenceNetwork& net,
                                                        int max_len) {
    std::vector<std::string> nodes(net.nodes.begin(), net.nodes.end());
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& [pair, kind] : net.edges) edges.insert(pair);

    std::set<std::vector<std::string>> found;
    std::vector<std::string> path;
    std::set<std::string> on_path;

    // Walk every simple path from every start and canonicalize each closed
    // cycle by rotating its smallest node to the front.
    std::function<void(const std::string&)> walk = [&](const std::string& u) {
        for (const auto& v : nodes) {
            if (!edges.count({u, v})) continue;
            if (v == path.front() && path.size() >= 3) {
                auto smallest = std::min_element(path.begin(), path.end());
                std::vector<std::string> canon(smallest, path.end());
                canon.insert(canon.end(), path.begin(), smallest);
                found.insert(canon);
            } else if (!on_path.count(v) && static_cast<int>(path.size()) < max_len) {
                path.push_back(v);
                on_path.insert(v);
                walk(v);
                on_path.erase(v);
                path.pop_back();
            }
        }
    };
    for (const auto& start : nodes) {
        path.assign(1, start);
        on_path = {start};
        walk(start);
    }
    return found;
}

// --- textbook Welch oracle ---

struct WelchOracle {
    long double t = 0;
    long double df = 0;
    long double p = 1;
};

inline long double t_density(long double x, long double df) {
    const long double pi = 3.14159265358979323846264338327950288L;
    long double ln = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                     0.5L * std::log(df * pi) - (df + 1) / 2 * std::log1p(x * x / df);
    return std::exp(ln);
}

inline long double adaptive_simpson(const std::function<long double(long double)>& f,
                                    long double a, long double b, long double fa, long double fm,
                                    long double fb, long double whole, long double eps, int depth) {
    long double m = (a + b) / 2;
    long double lm = (a + m) / 2;
    long double rm = (m + b) / 2;
    long double flm = f(lm);
    long double frm = f(rm);
    long double left = (m - a) / 6 * (fa + 4 * flm + fm);
    long double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * eps) {
        return left + right + (left + right - whole) / 15;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double eps) {
    long double fa = f(a);
    long double fb = f(b);
    long double m = (a + b) / 2;
    long double fm = f(m);
    long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 48);
}

// Two passes: the second run's tolerance scales with the first estimate,
// so tiny integrals still come out with full relative precision.
inline long double integrate_rel(const std::function<long double(long double)>& f, long double a,
                                 long double b, long double rel) {
    long double rough = integrate(f, a, b, 1e-20L);
    long double eps = std::max(std::fabs(rough) * rel, 1e-280L);
    return integrate(f, a, b, eps);
}

// Two-pass means/variances in long double; p by quadrature of the central
// t density, not by the incomplete beta the implementation uses.
inline WelchOracle welch_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    auto mean = [](const std::vector<double>& v) {
        long double s = 0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto var = [](const std::vector<double>& v, long double m) {
        long double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return s / (v.size() - 1);
    };
    long double ma = mean(a), mb = mean(b);
    long double va = var(a, ma), vb = var(b, mb);
    long double na = a.size(), nb = b.size();
    long double sa = va / na, sb = vb / nb;

    WelchOracle o;
    o.t = (ma - mb) / std::sqrt(sa + sb);
    o.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1) + sb * sb / (nb - 1));
    if (o.t == 0) {
        o.p = 1;
        return o;
    }
    long double abs_t = std::fabs(o.t);
    long double df = o.df;
    if (abs_t <= 1) {
        // p is large here; the central integral carries no cancellation risk
        long double body =
            integrate([df](long double x) { return t_density(x, df); }, 0, abs_t, 1e-18L);
        o.p = 1 - 2 * body;
    } else {
        // integrate the tail itself via x = t/v, keeping tiny p exact
        long double tail = integrate_rel(
            [abs_t, df](long double v) {
                if (v <= 0) return 0.0L;
                return t_density(abs_t / v, df) * abs_t / (v * v);
            },
            0, 1, 1e-13L);
        o.p = 2 * tail;
    }
    return o;
}

// --- sampling frame builder: the full default design ---

inline std::vector<patronnet::BlockFrame> default_test_frames() {
    std::vector<patronnet::BlockFrame> frames;
    auto strata = patronnet::default_strata();
    for (std::size_t i = 0; i < strata.size(); ++i) {
        const auto& stratum = strata[i];
        int n_blocks = stratum.block_quota + 1;
        for (int j = 0; j < n_blocks; ++j) {
            patronnet::BlockFrame frame;
            frame.block_id = "S" + std::to_string(i + 1) + "B" + std::to_string(j + 1);
            frame.stratum_key = stratum.key();
            frame.household_count = 400 + 137 * j + 61 * static_cast<int>(i);
            // In LWE strata the first block of the fixture has no forested
            // village, which exercises the automatic non-forest rule.
            bool zero_forest_block = stratum.lwe && j == 0 &&
                                     (stratum.state == patronnet::SurveyState::EasternUp ||
                                      stratum.coastal);
            for (int k = 0; k < 4; ++k) {
                patronnet::VillageEntry v;
                v.village_id = frame.block_id + "V" + std::to_string(k + 1);
                v.households = 40 + 60 * k;  // 40, 100, 160, 220
                v.forested = stratum.lwe && !zero_forest_block && k != 0;
                frame.villages.push_back(v);
            }
            frames.push_back(std::move(frame));
        }
    }
    return frames;
}

}  // namespace testhelp
