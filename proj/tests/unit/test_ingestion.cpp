#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "hfentropy/error.hpp"
#include "hfentropy/ingestion.hpp"

using namespace hfentropy;
using namespace hfentropy::ingest;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("hfentropy-ingest-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

std::vector<double> returns_of(const PriceSeries& s) {
    std::vector<double> r;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (day_of(s.observations[i].time) == day_of(s.observations[i - 1].time)) {
            r.push_back(std::log(s.observations[i].price / s.observations[i - 1].price));
        }
    }
    return r;
}

double autocovariance(const std::vector<double>& x, std::size_t lag) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t t = lag; t < x.size(); ++t) s += (x[t] - mean) * (x[t - lag] - mean);
    return s / static_cast<double>(x.size());
}

PriceSeries minute_series(int first_offset, int last_offset, double start_price = 1.0) {
    PriceSeries s;
    s.session.close_minute = s.session.open_minute + 10;
    const Timestamp open = parse_timestamp("2024-03-15T09:30");
    double p = start_price;
    for (int m = first_offset; m <= last_offset; ++m, p += 1.0) s.observations.push_back({open + Minutes{m}, p});
    return s;
}

}  // namespace

TEST(LoadCsv, ThreeValidRows) {
    TempDir dir;
    const auto path = dir.write("ABC.csv",
                                "timestamp,price\n2024-03-15T09:30,10\n2024-03-15T09:31,10.5\n2024-03-15T09:32,10.25\n");
    const auto r = load_csv(path, SessionSpec{});
    EXPECT_EQ(r.series.size(), 3u);
    EXPECT_EQ(r.series.asset_id, "ABC");
    EXPECT_EQ(r.dropped_out_of_session, 0u);
    EXPECT_DOUBLE_EQ(r.series.observations[1].price, 10.5);
    EXPECT_NO_THROW(r.series.validate());
}

TEST(LoadCsv, NonPositivePriceIsAValidationError) {
    TempDir dir;
    const auto path = dir.write("x.csv", "2024-03-15T09:30,10\n2024-03-15T09:31,0\n");
    EXPECT_THROW(load_csv(path, SessionSpec{}), ValidationError);
}

TEST(LoadCsv, OutOfSessionRowIsDroppedAndCounted) {
    TempDir dir;
    const auto path = dir.write("x.csv", "timestamp,price\n2024-03-15T08:00,10\n");
    const auto r = load_csv(path, SessionSpec{});
    EXPECT_EQ(r.series.size(), 0u);
    EXPECT_EQ(r.dropped_out_of_session, 1u);
}

TEST(LoadCsv, MalformedRowReportsItsLine) {
    TempDir dir;
    const auto path = dir.write("x.csv", "timestamp,price\n2024-03-15T09:30,10\n2024-03-15T09:31,abc\n");
    try {
        load_csv(path, SessionSpec{});
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    const auto bad_ts = dir.write("y.csv", "2024-03-15T09:30,10\nnot-a-time,11\n");
    try {
        load_csv(bad_ts, SessionSpec{});
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    const auto no_comma = dir.write("z.csv", "2024-03-15T09:30 10\n");
    EXPECT_THROW(load_csv(no_comma, SessionSpec{}), ParseError);
}

TEST(LoadCsv, NonIncreasingTimestampsAreAValidationError) {
    TempDir dir;
    const auto path = dir.write("x.csv", "2024-03-15T09:31,10\n2024-03-15T09:31,11\n");
    EXPECT_THROW(load_csv(path, SessionSpec{}), ValidationError);
}

TEST(LoadCsv, MissingFileIsAnIoError) {
    EXPECT_THROW(load_csv("/nonexistent/file.csv", SessionSpec{}), IoError);
}

TEST(LoadCsv, RoundTripsThroughWriteCsv) {
    TempDir dir;
    SyntheticSpec spec;
    spec.seed = 3;
    const auto s = generate_synthetic(spec, 2, 31, "RT");
    const auto path = std::filesystem::temp_directory_path() / "hfentropy-roundtrip.csv";
    write_csv(s, path);
    SessionSpec session = s.session;
    const auto back = load_csv(path, session, "RT");
    std::filesystem::remove(path);
    ASSERT_EQ(back.series.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back.series.observations[i].time, s.observations[i].time);
        EXPECT_NEAR(back.series.observations[i].price, s.observations[i].price, 1e-8 * s.observations[i].price);
    }
}

TEST(Resample, IntervalOneIsIdentity) {
    const auto s = minute_series(0, 10);
    const auto r = resample(s, 1);
    ASSERT_EQ(r.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(r.observations[i].time, s.observations[i].time);
        EXPECT_EQ(r.observations[i].price, s.observations[i].price);
    }
}

TEST(Resample, KeepsLastPriceAtOrBeforeEachGridPoint) {
    const auto s = minute_series(1, 10);  // prices 1..10 at minutes 1..10
    const auto r = resample(s, 5);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r.observations[0].price, 5.0);
    EXPECT_EQ(r.observations[1].price, 10.0);
    EXPECT_EQ(s.session.offset_from_open(r.observations[0].time), 5);
    EXPECT_EQ(s.session.offset_from_open(r.observations[1].time), 10);
    EXPECT_EQ(r.interval_minutes, 5);
}

TEST(Resample, GridPointWithoutEarlierTradeIsMissing) {
    const auto s = minute_series(7, 10);
    const auto r = resample(s, 5);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(s.session.offset_from_open(r.observations[0].time), 10);
}

TEST(Resample, IsIdempotent) {
    SyntheticSpec spec;
    const auto s = generate_synthetic(spec, 3, 391);
    const auto once = resample(s, 5);
    const auto twice = resample(once, 5);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        EXPECT_EQ(once.observations[i].time, twice.observations[i].time);
        EXPECT_EQ(once.observations[i].price, twice.observations[i].price);
    }
}

TEST(Resample, IntervalMustDivideTheSession) {
    const auto s = minute_series(0, 10);
    EXPECT_THROW(resample(s, 3), InputError);
    EXPECT_THROW(resample(s, 0), InputError);
}

TEST(Synthetic, DeterministicForAFixedSeed) {
    SyntheticSpec spec;
    spec.seed = 99;
    spec.tick = 0.01;
    spec.pricing_error_sd = 1e-4;
    spec.volatility = VolatilityRegime{};
    const auto a = generate_synthetic(spec, 5, 391);
    const auto b = generate_synthetic(spec, 5, 391);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.observations[i].price, b.observations[i].price);
    spec.seed = 100;
    const auto c = generate_synthetic(spec, 5, 391);
    EXPECT_NE(a.observations.back().price, c.observations.back().price);
}

TEST(Synthetic, OutputSatisfiesPriceSeriesInvariants) {
    const std::vector<ProcessSpec> processes{WhiteNoise{}, Ar1{0.7}, Ma1{-0.6}, ArmaProcess{{0.3}, {0.2}}};
    for (const auto& process : processes) {
        SyntheticSpec spec;
        spec.process = process;
        spec.tick = 0.05;
        spec.pricing_error_sd = 5e-4;
        spec.volatility = VolatilityRegime{0.8, 0.7, {}};
        spec.intraday_profile = u_shaped_profile(390, 1.5);
        const auto s = generate_synthetic(spec, 7, 391);
        EXPECT_EQ(s.size(), 7u * 391u);
        EXPECT_NO_THROW(s.validate());
        EXPECT_EQ(s.session.length_minutes(), 390);
        for (const auto& o : s.observations) {
            const double ticks = o.price / 0.05;
            EXPECT_NEAR(ticks, std::round(ticks), 1e-6);
        }
    }
}

TEST(Synthetic, InvalidSpecsAreRejected) {
    SyntheticSpec spec;
    spec.process = Ar1{1.0};
    EXPECT_THROW(generate_synthetic(spec, 2, 10), SpecError);
    spec.process = WhiteNoise{};
    spec.innovation_sd = 0.0;
    EXPECT_THROW(generate_synthetic(spec, 2, 10), SpecError);
    spec.innovation_sd = 1e-3;
    spec.intraday_profile = {1.0, 2.0};
    EXPECT_THROW(generate_synthetic(spec, 2, 10), SpecError);
    spec.intraday_profile.clear();
    spec.volatility = VolatilityRegime{0.5, 0.1, {1.0}};
    EXPECT_THROW(generate_synthetic(spec, 2, 10), SpecError);
    spec.volatility.reset();
    spec.tick = -1.0;
    EXPECT_THROW(generate_synthetic(spec, 2, 10), SpecError);
}

TEST(Synthetic, PricingErrorsInduceNegativeLagOneAutocovariance) {
    SyntheticSpec spec;
    spec.innovation_sd = 1e-3;
    spec.pricing_error_sd = 5e-4;
    spec.seed = 11;
    const auto r = returns_of(generate_synthetic(spec, 500, 391));
    const double eta2 = spec.pricing_error_sd * spec.pricing_error_sd;
    const double n = static_cast<double>(r.size());
    // Var of the lag-1 product is about var(r)^2 / n with var(r) = sigma^2 + 2 eta^2.
    const double var_r = 1e-6 + 2.0 * eta2;
    const double se = var_r / std::sqrt(n);
    EXPECT_NEAR(autocovariance(r, 1), -eta2, 4.0 * se);
    EXPECT_NEAR(autocovariance(r, 2), 0.0, 4.0 * se);
}

TEST(Synthetic, Ar1ReturnsHaveLagOneCorrelationPhi) {
    SyntheticSpec spec;
    spec.process = Ar1{0.5};
    spec.seed = 12;
    const auto r = returns_of(generate_synthetic(spec, 2558, 391));
    ASSERT_GT(r.size(), 990000u);
    const double rho = autocovariance(r, 1) / autocovariance(r, 0);
    // Bartlett: var(rho_hat) ~ (1 - phi^2) / n.
    const double se = std::sqrt((1.0 - 0.25) / static_cast<double>(r.size()));
    EXPECT_NEAR(rho, 0.5, 3.0 * se);
}

TEST(Synthetic, WhiteNoiseSignBlocksAreUniform) {
    SyntheticSpec spec;
    spec.seed = 13;
    const auto r = returns_of(generate_synthetic(spec, 2565, 391));
    ASSERT_GE(r.size(), 1000000u);
    for (int k = 1; k <= 3; ++k) {
        const std::size_t n_blocks = r.size() / static_cast<std::size_t>(k);
        std::vector<double> counts(std::size_t{1} << k, 0.0);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            std::size_t code = 0;
            for (int j = 0; j < k; ++j) code = 2 * code + (r[b * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)] > 0);
            counts[code] += 1.0;
        }
        const double p = 1.0 / static_cast<double>(counts.size());
        const double mean = p * static_cast<double>(n_blocks);
        const double sd = std::sqrt(static_cast<double>(n_blocks) * p * (1.0 - p));
        for (double c : counts) EXPECT_NEAR(c, mean, 4.0 * sd) << "k=" << k;
    }
}

TEST(Synthetic, IntradayProfileAndDayFactorsScaleReturns) {
    SyntheticSpec spec;
    spec.seed = 14;
    std::vector<double> profile(9, 1.0);
    profile[4] = 3.0;
    spec.intraday_profile = profile;
    const auto base_spec = [&] {
        SyntheticSpec s = spec;
        s.intraday_profile.clear();
        return s;
    }();
    const auto scaled = returns_of(generate_synthetic(spec, 3, 10));
    const auto base = returns_of(generate_synthetic(base_spec, 3, 10));
    ASSERT_EQ(scaled.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double factor = profile[i % 9];
        EXPECT_NEAR(scaled[i], factor * base[i], 1e-12);
    }

    SyntheticSpec vol = base_spec;
    vol.volatility = VolatilityRegime{0.0, 0.0, {1.0, 2.0, 0.5}};
    const auto v = returns_of(generate_synthetic(vol, 3, 10));
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double factor = std::vector<double>{1.0, 2.0, 0.5}[i / 9];
        EXPECT_NEAR(v[i], factor * base[i], 1e-12);
    }
}

TEST(UShapedProfile, HasMeanOneAndHigherEnds) {
    const auto p = u_shaped_profile(390, 2.0);
    ASSERT_EQ(p.size(), 390u);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0) / 390.0, 1.0, 1e-12);
    EXPECT_GT(p.front(), p[195]);
    EXPECT_GT(p.back(), p[195]);
    EXPECT_NEAR(p.front(), p.back(), 1e-12);
}
