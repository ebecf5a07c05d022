#include <doctest.h>

#include "omsq/config.hpp"

using namespace omsq;

TEST_CASE("config: effective section parses and fills fields") {
    const Config cfg = parse_config_text(
        "# operating point\n"
        "[effective]  ; section comment\n"
        "kappa1 = 100   # inline comment\n"
        "gamma_m = 1e-6\n"
        "G1 = 0.1\n"
        "phi = 1.5707963267948966\n"
        "delta_c = 10\n"
        "Lambda = 10\n"
        "chi_mag = 40\n");
    CHECK(cfg.mode == ConfigMode::effective);
    CHECK(cfg.effective.kappa1 == 100.0);
    CHECK(cfg.effective.G1_mag == 0.1);
    CHECK(cfg.effective.chi_mag == 40.0);
    CHECK_FALSE(cfg.sweep.has_value());
}

TEST_CASE("config: physical section with si keys") {
    const Config cfg = parse_config_text(
        "[physical]\n"
        "omega_m_si = 1.2566370614359172e8\n"
        "omega_L = 2.5e7\n"
        "delta_bar_c = 10\n"
        "kappa1 = 100\n"
        "kappa2_si = 2.5132741228718345e11\n" // 2000 omega_m, given in rad/s
        "gamma_m = 1e-6\n"
        "g1 = 1e-4\n"
        "g2 = 1e-4\n"
        "eta = 1e-4\n"
        "chi0_mag = 1e-3\n"
        "P1 = 5e-3\n"
        "P2 = 5e-3\n");
    CHECK(cfg.mode == ConfigMode::physical);
    CHECK(cfg.physical.omega_m == doctest::Approx(1.2566370614359172e8));
    CHECK(cfg.physical.kappa2 == doctest::Approx(2000.0));
}

TEST_CASE("config: unknown key is a hard error with the line number") {
    try {
        parse_config_text("[effective]\nkappa1 = 100\nkapa2 = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("kapa2") != std::string::npos);
    }
}

TEST_CASE("config: malformed lines and sections") {
    CHECK_THROWS_AS(parse_config_text("[effectve]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[effective]\nkappa1 100\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kappa1 = 100\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[effective]\nkappa1 = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[effective]\nkappa1 = 1\nkappa1 = 2\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(""), ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("[physical]\nomega_L = 1\n[effective]\nkappa1 = 1\n"),
        ConfigError);
    // _si key without omega_m_si
    CHECK_THROWS_AS(parse_config_text("[effective]\nkappa1_si = 1e8\n"),
                    ConfigError);
}

TEST_CASE("config: sweep section") {
    const Config cfg = parse_config_text(
        "[effective]\n"
        "kappa1 = 100\n"
        "gamma_m = 1e-6\n"
        "chi_mag = 40\n"
        "delta_c = 10\n"
        "[sweep]\n"
        "name = scan\n"
        "axis1 = phi\n"
        "axis1_min = 0\n"
        "axis1_max = 3.141592653589793\n"
        "axis1_points = 41\n"
        "axis2 = Lambda\n"
        "axis2_values = 0, 1, 5\n"
        "outputs = margin, S0_db\n"
        "oracle_fraction = 0.05\n"
        "seed = 42\n");
    REQUIRE(cfg.sweep.has_value());
    const SweepSpec& s = *cfg.sweep;
    CHECK(s.name == "scan");
    REQUIRE(s.axes.size() == 2);
    CHECK(s.axes[0].name == "phi");
    CHECK(s.axes[0].n_points == 41);
    CHECK(s.axes[1].values == std::vector<double>{0.0, 1.0, 5.0});
    CHECK(s.outputs == std::vector<std::string>{"margin", "S0_db"});
    CHECK(s.oracle_fraction == 0.05);
    CHECK(s.seed == 42);
}

TEST_CASE("config: sweep axis referencing a missing field fails") {
    CHECK_THROWS_AS(parse_config_text("[effective]\nkappa1 = 1\ngamma_m = 1\n"
                                      "[sweep]\naxis1 = nope\naxis1_min = 0\n"
                                      "axis1_max = 1\naxis1_points = 5\n"),
                    ConfigError);
}

TEST_CASE("config: physical sweep accepts the joint power field P") {
    const Config cfg = parse_config_text(
        "[physical]\n"
        "omega_m_si = 1.2566370614359172e8\n"
        "omega_L = 2.5e7\n"
        "kappa1 = 100\nkappa2 = 2000\ngamma_m = 1e-6\n"
        "[sweep]\n"
        "axis1 = P\naxis1_min = 0\naxis1_max = 0.01\naxis1_points = 11\n");
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->axes[0].name == "P");
    CHECK(cfg.sweep->physical_mode());
}
