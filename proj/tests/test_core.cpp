#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "ofdmim/core.hpp"
#include "oracles.hpp"

using namespace ofdmim;
using Catch::Approx;

TEST_CASE("SystemConfig derives the default setup sizes") {
    const auto cfg = SystemConfig::default_setup();
    CHECK(cfg.g == 32);
    CHECK(cfg.p1 == 2);
    CHECK(cfg.p2 == 8);
    CHECK(cfg.p == 10);
    CHECK(cfg.m == 320);
    CHECK(cfg.sap_count() == 4);
}

TEST_CASE("SystemConfig rejects invalid parameters") {
    auto rejects = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code() == ErrorCode::InvalidConfig;
        }
        return false;
    };
    CHECK(rejects([] { SystemConfig::make(128, 4, 4, 16); }));   // k = n
    CHECK(rejects([] { SystemConfig::make(128, 4, 0, 16); }));
    CHECK(rejects([] { SystemConfig::make(130, 4, 2, 16); }));   // N not a multiple of n
    CHECK(rejects([] { SystemConfig::make(128, 4, 2, 8); }));    // not square QAM
    CHECK(rejects([] { SystemConfig::make(128, 4, 2, 16, 0); })); // oversample
    CHECK(rejects([] { SystemConfig::make(128, 4, 2, 16, 4, 129); }));
    CHECK(rejects([] { SystemConfig::make(128, 4, 2, 16, 4, 8, 5, 0.0); }));
}

TEST_CASE("sap_index_to_pattern follows lexicographic order") {
    CHECK(sap_index_to_pattern(0, 4, 2) == std::vector<int>{0, 1});
    CHECK(sap_index_to_pattern(3, 4, 2) == std::vector<int>{1, 2});
    CHECK(sap_index_to_pattern(1, 2, 1) == std::vector<int>{1});
    CHECK_THROWS_AS(sap_index_to_pattern(4, 4, 2), Error);

    for (auto [n, k] : {std::pair{4, 2}, {5, 2}, {6, 3}, {8, 4}, {7, 1}, {9, 5}}) {
        const auto combos = oracle::lexicographic_combinations(n, k);
        const int p1 = std::bit_width(combos.size()) - 1;
        for (int idx = 0; idx < (1 << p1); ++idx) {
            INFO("n=" << n << " k=" << k << " idx=" << idx);
            CHECK(sap_index_to_pattern(idx, n, k) == combos[idx]);
        }
    }
}

TEST_CASE("pattern_to_sap_index inverts the codebook and flags unused patterns") {
    CHECK(pattern_to_sap_index(std::vector<int>{0, 1}, 4, 2) == 0u);
    CHECK(pattern_to_sap_index(std::vector<int>{1}, 2, 1) == 1u);
    CHECK_FALSE(pattern_to_sap_index(std::vector<int>{2, 3}, 4, 2).has_value());
    CHECK_FALSE(pattern_to_sap_index(std::vector<int>{1, 3}, 4, 2).has_value());

    try {
        pattern_to_sap_index(std::vector<int>{0, 1, 2}, 4, 2);
        FAIL("expected invalid-pattern");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidPattern);
    }

    for (auto [n, k] : {std::pair{4, 2}, {6, 3}, {8, 2}}) {
        const auto combos = oracle::lexicographic_combinations(n, k);
        const int p1 = std::bit_width(combos.size()) - 1;
        for (std::size_t r = 0; r < combos.size(); ++r) {
            const auto got = pattern_to_sap_index(combos[r], n, k);
            if (static_cast<int>(r) < (1 << p1)) {
                REQUIRE(got.has_value());
                CHECK(*got == r);
                CHECK(sap_index_to_pattern(*got, n, k) == combos[r]);
            } else {
                CHECK_FALSE(got.has_value());
            }
        }
    }
}

TEST_CASE("16-QAM constellation and Gray labels") {
    const Constellation c(16);
    std::set<std::pair<int, int>> pts;
    for (const auto& p : c.points()) pts.insert({static_cast<int>(p.real()), static_cast<int>(p.imag())});
    std::set<std::pair<int, int>> expected;
    for (int re : {-3, -1, 1, 3})
        for (int im : {-3, -1, 1, 3}) expected.insert({re, im});
    CHECK(pts == expected);

    REQUIRE(c.amplitude_levels().size() == 3);
    CHECK(c.amplitude_levels()[0] == Approx(std::sqrt(2.0)));
    CHECK(c.amplitude_levels()[1] == Approx(std::sqrt(10.0)));
    CHECK(c.amplitude_levels()[2] == Approx(std::sqrt(18.0)));
    CHECK(c.mean_energy() == Approx(10.0));

    CHECK(qam_map(0b0000, c) == cplx(-3, -3));
    CHECK(qam_map(0b0111, c) == cplx(-1, 1));
    CHECK(qam_map(0b1101, c) == cplx(1, -1));
    CHECK(qam_map(0b1010, c) == cplx(3, 3));
    CHECK(qam_demap(cplx(-3, -3), c) == 0b0000u);
    CHECK(qam_demap(qam_map(0b1101, c), c) == 0b1101u);

    try {
        qam_demap(cplx(0, 0), c);
        FAIL("expected invalid-symbol");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidSymbol);
    }
    CHECK_THROWS_AS(qam_demap(cplx(5, 1), c), Error);
}

TEST_CASE("QAM labels are Gray: neighbours differ in one bit, round trip for all orders") {
    for (int M : {4, 16, 64, 256}) {
        const Constellation c(M);
        std::set<std::pair<double, double>> distinct;
        for (BitWord b = 0; b < static_cast<BitWord>(M); ++b) {
            const cplx p = qam_map(b, c);
            distinct.insert({p.real(), p.imag()});
            CHECK(qam_demap(p, c) == b);
            for (BitWord o = 0; o < static_cast<BitWord>(M); ++o) {
                if (std::abs(std::abs(qam_map(o, c) - p) - 2.0) < 1e-12) CHECK(std::popcount(o ^ b) == 1);
            }
        }
        CHECK(distinct.size() == static_cast<std::size_t>(M));
    }
}

TEST_CASE("amp_floor picks the weakest active symbol") {
    CHECK(amp_floor(CVec{{1, 1}, {3, 3}}) == Approx(std::sqrt(2.0)));
    CHECK(amp_floor(CVec{{3, 1}, {1, 3}}) == Approx(std::sqrt(10.0)));
    CHECK(amp_floor(CVec{{3, 3}, {3, 3}}) == Approx(std::sqrt(18.0)));
    try {
        amp_floor(CVec{});
        FAIL("expected invalid-input");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidInput);
    }
}
