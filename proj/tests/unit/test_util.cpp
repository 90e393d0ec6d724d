#include "patronnet/util.hpp"

#include <set>

#include "doctest.h"
#include "../helpers.hpp"
#include "patronnet/rng.hpp"

using namespace patronnet;

TEST_CASE("sha256 matches the published test vector") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("format_double is shortest-round-trip") {
    CHECK(format_double(0.05) == "0.05");
    CHECK(format_double(5.0) == "5");
    CHECK(format_double(1.25) == "1.25");
    for (double v : {0.1, 1e-9, 123456.789, 2.0 / 3.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("atomic writes land complete and leave no temp files") {
    testhelp::TempDir dir("atomic");
    auto path = dir.path / "out.txt";
    write_file_atomic(path, "hello\n");
    CHECK(read_file_text(path) == "hello\n");
    write_file_atomic(path, "rewritten\n");
    CHECK(read_file_text(path) == "rewritten\n");
    std::size_t entries = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir.path)) {
        (void)entry;
        ++entries;
    }
    CHECK(entries == 1);
}

TEST_CASE("Rng streams are seed-deterministic") {
    Rng a(99), b(99), c(100);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    bool all_equal = true;
    for (int i = 0; i < 100; ++i) {
        if (a.next_u64() != c.next_u64()) all_equal = false;
    }
    CHECK(!all_equal);
}

TEST_CASE("Rng bounded draws stay in range and cover small supports") {
    Rng rng(5);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        auto x = rng.below(7);
        CHECK(x < 7);
        seen.insert(x);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.below(1) == 0);

    for (int i = 0; i < 1000; ++i) {
        double u = rng.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("Rng shuffle is a seed-stable permutation") {
    std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8};
    auto v2 = v1;
    Rng a(3), b(3);
    a.shuffle(v1);
    b.shuffle(v2);
    CHECK(v1 == v2);
    std::multiset<int> elements(v1.begin(), v1.end());
    CHECK(elements == std::multiset<int>{1, 2, 3, 4, 5, 6, 7, 8});
}
