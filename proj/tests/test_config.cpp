#include "doctest.h"
#include "kt/config.hpp"

using namespace kt;

TEST_CASE("presets expand to the displayed structures") {
    RunConfig c = RunConfig::fromPreset("omega_a");
    CHECK(c.frameName == "Ja");
    CHECK(c.paramExact.at("a") == cq(1, 2));
    AcsFrame fr = c.frame();
    CHECK(fr.P()(0, 3) == cq(1, 2));

    RunConfig tf = RunConfig::fromPreset("omega_tf");
    CHECK(tf.frameName == "example42");
    CHECK(tf.paramExact.at("t") == cq(1));
    CHECK(tf.metricSpec().dependsOnCoordinates());

    RunConfig tilde = RunConfig::fromPreset("omega_tilde_a");
    auto cm = tilde.metricSpec().tryConstant(tilde.paramExact);
    REQUIRE(cm.has_value());
    CHECK(cm->h12 == -cqi() * cq(1, 2));
    CHECK(cm->isHermitianPD());

    CHECK_THROWS_AS(RunConfig::fromPreset("nonsense"), ConfigError);
}

TEST_CASE("ini round trip with custom structure constants") {
    std::string ini = R"(
# a broken algebra: d^2 != 0
[manifold]
c3_12 = -1
c1_34 = 1

[frame]
preset = example42

[metric]
preset = identity

[solver]
N = 8
seed = 7
)";
    RunConfig c = RunConfig::fromIniText(ini);
    CHECK(c.algebra.d2Defect().has_value());
    CHECK(c.gridN == 8);
    CHECK(c.solver.seed == 7);

    std::string good = R"(
[manifold]
preset = kodaira-thurston
[frame]
preset = Ja
a = 3/4
[metric]
preset = omega_tilde_a
[solver]
N = 12
k = 4
)";
    RunConfig g = RunConfig::fromIniText(good);
    CHECK_FALSE(g.algebra.d2Defect().has_value());
    CHECK(g.paramExact.at("a") == cq(3, 4));
    CHECK(g.solver.k == 4);
    auto cm = g.metricSpec().tryConstant(g.paramExact);
    REQUIRE(cm.has_value());
    CHECK(cm->isHermitianPD());   // a^2 < 1
}

TEST_CASE("parameter overrides and rebinding") {
    RunConfig c = RunConfig::fromPreset("omega_a");
    c.setParam("a", "0");
    c.setParam("N", "10");
    c.finalize();
    CHECK(c.paramExact.at("a") == cq(0));
    CHECK(c.gridN == 10);
    AcsFrame fr = c.frame();
    CHECK(fr.P()(0, 3).isZero());
}

TEST_CASE("config errors carry messages") {
    CHECK_THROWS_AS(RunConfig::fromIniText("[metric]\npreset = who"), ConfigError);
    CHECK_THROWS_AS(RunConfig::fromIniText("key = 1"), ConfigError);
    CHECK_THROWS_AS(RunConfig::fromIniText("[frame]\npreset = Ja\na = sin(1)"), ConfigError);
}
