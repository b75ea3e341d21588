#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

#include "fortsim/dataset.hpp"
#include "fortsim/fitting.hpp"
#include "fortsim/io.hpp"
#include "fortsim/units.hpp"

using namespace fortsim;

TEST(numbers, shortest_round_trip) {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 8545132.017764237, 1.0 / 3.0}) {
        const auto s = format_number(v);
        ASSERT_TRUE(parse_number(s).has_value()) << s;
        EXPECT_EQ(*parse_number(s), v);
    }
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(INFINITY), "inf");
    EXPECT_TRUE(std::isnan(*parse_number("nan")));
    EXPECT_EQ(*parse_number(" +3 "), 3.0);
    EXPECT_EQ(*parse_number("-inf"), -INFINITY);
}

TEST(numbers, rejects_junk) {
    EXPECT_FALSE(parse_number(""));
    EXPECT_FALSE(parse_number("1.0x"));
    EXPECT_FALSE(parse_number("1,0"));
    EXPECT_FALSE(parse_number("abc"));
}

TEST(key_values, parse_and_format) {
    const auto kv = parse_key_values("# comment\n  a = 1 \n\nb= two words\nc =\n");
    ASSERT_EQ(kv.size(), 3u);
    EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
    EXPECT_EQ(kv[1].second, "two words");
    EXPECT_EQ(kv[2].second, "");
    EXPECT_EQ(format_key_values(kv, "# "), "# a = 1\n# b = two words\n# c = \n");
    EXPECT_EQ(parse_key_values(format_key_values(kv)), kv);
}

TEST(key_values, errors_name_the_line) {
    try {
        parse_key_values("a = 1\nno equals here\n");
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_key_values(" = 3"), std::invalid_argument);
}

namespace {

ScanDataset sample() {
    ScanDataset d;
    d.x_label = "pulse duration";
    d.x_unit = "us";
    d.x_unit_scale = 1e-6;
    d.metadata = {{"seed", "7"}, {"noise", "on"}};
    for (int i = 0; i < 5; ++i) d.points.push_back({i * 0.25e-6, 0.1 * i + 0.013, 0.02});
    return d;
}

}  // namespace

TEST(csv, round_trip) {
    const auto d = sample();
    const auto text = dataset_to_csv(d);
    const auto back = parse_dataset_csv(text);
    EXPECT_EQ(back.x_label, d.x_label);
    EXPECT_EQ(back.x_unit, d.x_unit);
    EXPECT_EQ(back.metadata, d.metadata);
    ASSERT_EQ(back.points.size(), d.points.size());
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        EXPECT_NEAR(back.points[i].x, d.points[i].x, 1e-21);
        EXPECT_EQ(back.points[i].fraction, d.points[i].fraction);
        EXPECT_EQ(back.points[i].std_error, d.points[i].std_error);
    }
    EXPECT_EQ(dataset_to_csv(back), text);
}

TEST(csv, layout) {
    const auto text = dataset_to_csv(sample());
    EXPECT_EQ(text.rfind("# x_label = pulse duration\n", 0), 0u);
    EXPECT_NE(text.find("\nx,x_unit,fraction,stderr\n0,us,0.013,0.02\n0.25,us,"),
              std::string::npos);
}

TEST(csv, display_units_hide_conversion_noise) {
    ScanDataset d;
    d.x_unit = "kHz";
    d.x_unit_scale = kTwoPi * 1e3;
    d.points.push_back({kTwoPi * 1e3 * 7.3, 0.5, 0.0});
    EXPECT_NE(dataset_to_csv(d).find("\n7.3,kHz,"), std::string::npos);
}

TEST(csv, parse_errors) {
    EXPECT_THROW(parse_dataset_csv("# a = 1\n"), std::invalid_argument);
    EXPECT_THROW(parse_dataset_csv("x,fraction\n1,2\n"), std::invalid_argument);
    EXPECT_THROW(parse_dataset_csv("x,x_unit,fraction,stderr\n1,s,2\n"), std::invalid_argument);
    EXPECT_THROW(parse_dataset_csv("x,x_unit,fraction,stderr\n1,s,q,0\n"), std::invalid_argument);
    EXPECT_THROW(parse_dataset_csv("x,x_unit,fraction,stderr\n1,s,0,0\n2,us,0,0\n"),
                 std::invalid_argument);
    EXPECT_THROW(parse_dataset_csv("x,x_unit,fraction,stderr\n# late = 1\n"),
                 std::invalid_argument);
}

TEST(fit_report, lists_every_parameter) {
    FitResult fit;
    fit.model = "exponential";
    fit.converged = true;
    fit.iterations = 4;
    fit.points = 4;
    fit.parameters = {{"amplitude", 1.0, 0.01, 0.1, true}, {"decay_time", 8.7e-4, 1e-5, 1e-5, false}};
    const auto kv = fit_report(fit);
    const std::string text = format_key_values(kv);
    EXPECT_EQ(text.rfind("model = exponential\nconverged = true\niterations = 4\npoints = 4\n", 0),
              0u);
    EXPECT_NE(text.find("decay_time = 0.00087\ndecay_time_stderr = 1e-05\n"), std::string::npos);
    EXPECT_NE(text.find("amplitude_stderr_with_systematic = 0.1\n"), std::string::npos);
}
