#include <doctest.h>

#include <cmath>

#include "omsq/csv.hpp"
#include "omsq/rng.hpp"
#include "omsq/sha1.hpp"

using namespace omsq;

TEST_CASE("sha1 known answers") {
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
          "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}

TEST_CASE("git blob hash matches git hash-object") {
    // $ echo hello | git hash-object --stdin
    CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("csv escaping and fixed-width number formatting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_row({"a", "b,c"}) == "a,\"b,c\"\n");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(csv_row_values({0.5, std::nullopt, 2.0}) == "0.5,,2\n");
}

TEST_CASE("rng: determinism and stream independence") {
    Rng a(42, 0), b(42, 0), c(42, 1);
    bool same_ab = true, same_ac = true;
    for (int k = 0; k < 64; ++k) {
        const auto x = a.next_u64();
        same_ab &= (x == b.next_u64());
        same_ac &= (x == c.next_u64());
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
}

TEST_CASE("rng: normal moments") {
    Rng r(7, 0);
    const int n = 200000;
    double sum = 0, sum2 = 0, sum3 = 0;
    for (int k = 0; k < n; ++k) {
        const double x = r.next_normal();
        sum += x;
        sum2 += x * x;
        sum3 += x * x * x;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(sum3 / n) < 0.03);
}

TEST_CASE("rng: uniform range") {
    Rng r(3, 0);
    for (int k = 0; k < 10000; ++k) {
        const double u = r.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
