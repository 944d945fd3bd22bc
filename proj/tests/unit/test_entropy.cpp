#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "hfentropy/entropy.hpp"
#include "hfentropy/error.hpp"

using namespace hfentropy;
using namespace hfentropy::entropy;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

SymbolSeries from_digits(const std::string& digits, int alphabet = 2) {
    SymbolSeries s;
    s.alphabet_size = alphabet;
    for (char c : digits) s.symbols.push_back(static_cast<std::uint8_t>(c - '0'));
    return s;
}

SymbolSeries iid(std::size_t n, double p_one, std::uint64_t seed, int alphabet = 2) {
    std::mt19937_64 rng(seed);
    SymbolSeries s;
    s.alphabet_size = alphabet;
    s.symbols.resize(n);
    if (alphabet == 2) {
        std::bernoulli_distribution b(p_one);
        for (auto& x : s.symbols) x = b(rng) ? 1 : 0;
    } else {
        std::uniform_int_distribution<int> u(0, alphabet - 1);
        for (auto& x : s.symbols) x = static_cast<std::uint8_t>(u(rng));
    }
    return s;
}

BlockDistribution from_counts(const std::vector<std::uint64_t>& counts) {
    BlockDistribution d;
    d.k = 1;
    d.alphabet_size = static_cast<int>(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) d.counts[i] = counts[i];
        d.n_blocks += counts[i];
    }
    return d;
}

// Direct textbook formulas, without caching or ordered summation.
double oracle_naive_bits(const std::vector<std::uint64_t>& counts) {
    const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h / std::log(2.0);
}

double oracle_g(std::uint64_t n) {
    long double s = 0.0L;
    for (std::uint64_t j = 1; j <= n / 2; ++j) s += 2.0L / (2.0L * static_cast<long double>(j) - 1.0L);
    return static_cast<double>(s) - kEulerGamma - std::log(2.0);
}

double oracle_grassberger_bits(const std::vector<std::uint64_t>& counts) {
    const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        h -= static_cast<double>(c) / n * (oracle_g(c) - std::log(n));
    }
    return h / std::log(2.0);
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd summarize(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

TEST(BlockDistribution, DefinitionExamples) {
    auto d = block_distribution(from_digits("010101"), 2);
    EXPECT_EQ(d.string_counts(), (std::map<std::string, std::uint64_t>{{"01", 3}}));
    EXPECT_EQ(d.n_blocks, 3u);

    d = block_distribution(from_digits("0101010"), 2);
    EXPECT_EQ(d.string_counts(), (std::map<std::string, std::uint64_t>{{"01", 3}}));
    EXPECT_EQ(d.n_blocks, 3u);

    d = block_distribution(from_digits("0120210", 3), 3);
    EXPECT_EQ(d.string_counts(), (std::map<std::string, std::uint64_t>{{"012", 1}, {"021", 1}}));
}

TEST(BlockDistribution, OrderOneIsTheHistogram) {
    const auto s = iid(1001, 0.3, 50);
    const auto d = block_distribution(s, 1);
    std::uint64_t ones = 0;
    for (auto x : s.symbols) ones += x;
    EXPECT_EQ(d.counts.at(1), ones);
    EXPECT_EQ(d.counts.at(0), s.size() - ones);
}

TEST(BlockDistribution, BlockCountIsFloorOfLengthOverK) {
    for (std::size_t n : {5u, 17u, 64u, 1000u}) {
        const auto s = iid(n, 0.5, n);
        for (int k = 1; k <= 5; ++k) {
            const auto d = block_distribution(s, k);
            EXPECT_EQ(d.n_blocks, n / static_cast<std::size_t>(k));
            std::uint64_t total = 0;
            for (const auto& [code, c] : d.counts) {
                EXPECT_LT(code, static_cast<std::uint64_t>(std::pow(2, k)));
                total += c;
            }
            EXPECT_EQ(total, d.n_blocks);
        }
    }
}

TEST(BlockDistribution, LargeCodeSpaceMatchesDenseCounting) {
    // k = 21 exceeds the dense table; compare against counting strings directly.
    const auto s = iid(21 * 300, 0.5, 51);
    const auto d = block_distribution(s, 21);
    std::map<std::string, std::uint64_t> expected;
    for (std::size_t b = 0; b < 300; ++b) {
        std::string key;
        for (std::size_t j = 0; j < 21; ++j) key.push_back(static_cast<char>('0' + s.symbols[b * 21 + j]));
        ++expected[key];
    }
    EXPECT_EQ(d.string_counts(), expected);
}

TEST(BlockDistribution, FlagsSparseOrders) {
    const auto s = iid(1000, 0.5, 52);
    EXPECT_FALSE(block_distribution(s, 9).sparse);
    EXPECT_TRUE(block_distribution(s, 10).sparse);
}

TEST(BlockDistribution, RejectsInvalidOrders) {
    const auto s = from_digits("0101");
    EXPECT_THROW(block_distribution(s, 0), InputError);
    EXPECT_THROW(block_distribution(s, 5), InputError);
    EXPECT_THROW(block_distribution(from_digits("0201"), 1), ValidationError);
}

TEST(NaiveEntropy, DefinitionExamples) {
    EXPECT_DOUBLE_EQ(naive_entropy(from_counts({7})).bits, 0.0);
    EXPECT_DOUBLE_EQ(naive_entropy(from_counts({5, 5})).bits, 1.0);
    EXPECT_DOUBLE_EQ(naive_entropy(from_counts({3, 3, 3, 3})).bits, 2.0);
    EXPECT_DOUBLE_EQ(naive_entropy(from_counts({0, 4, 0, 4})).bits, 1.0);
}

TEST(NaiveEntropy, MatchesFormulaAndBounds) {
    std::mt19937_64 rng(53);
    std::uniform_int_distribution<std::uint64_t> c(0, 50);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint64_t> counts(2 + trial % 30);
        for (auto& x : counts) x = c(rng);
        counts[0] += 1;
        const auto d = from_counts(counts);
        const double h = naive_entropy(d).bits;
        EXPECT_NEAR(h, oracle_naive_bits(counts), 1e-12);
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, std::log2(static_cast<double>(counts.size())));
    }
}

TEST(NaiveEntropy, NeverExceedsKLogAlphabet) {
    for (int alphabet : {2, 3}) {
        const auto s = iid(3000, 0.5, 54 + alphabet, alphabet);
        for (int k = 1; k <= 8; ++k) {
            EXPECT_LE(naive_entropy(block_distribution(s, k)).bits, k * std::log2(alphabet));
        }
    }
}

TEST(NaiveEntropy, InvariantUnderRelabeling) {
    auto s = iid(5000, 0.5, 55, 3);
    auto relabeled = s;
    for (auto& x : relabeled.symbols) x = static_cast<std::uint8_t>((x + 1) % 3);
    for (int k = 1; k <= 4; ++k) {
        EXPECT_NEAR(naive_entropy(block_distribution(s, k)).bits,
                    naive_entropy(block_distribution(relabeled, k)).bits, 1e-12);
    }
}

TEST(Grassberger, GValues) {
    EXPECT_NEAR(grassberger_g(0), -1.27036, 5e-6);
    EXPECT_NEAR(grassberger_g(1), -1.27036, 5e-6);
    EXPECT_NEAR(grassberger_g(2), 0.72964, 5e-6);
    EXPECT_NEAR(grassberger_g(3), 0.72964, 5e-6);
    for (std::uint64_t n : {0u, 1u, 2u, 7u, 100u, 12345u}) {
        EXPECT_NEAR(grassberger_g(n), oracle_g(n), 1e-12);
    }
    EXPECT_EQ(grassberger_g(40), grassberger_g(41));
}

TEST(Grassberger, MatchesFormulaOnRandomCounts) {
    std::mt19937_64 rng(56);
    std::uniform_int_distribution<std::uint64_t> c(0, 200);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint64_t> counts(1 + trial % 40);
        for (auto& x : counts) x = c(rng);
        counts[0] += 1;
        const auto d = from_counts(counts);
        const auto e = grassberger_entropy(d);
        EXPECT_NEAR(e.bits, oracle_grassberger_bits(counts), 1e-10);
        EXPECT_EQ(e.estimator, Estimator::Grassberger);
        EXPECT_EQ(e.n_blocks, d.n_blocks);
    }
}

TEST(Grassberger, AgreesWithNaiveForLargeEvenCounts) {
    // G_{2m} = ln(2m) + O(1/m^2); odd counts carry a 1/n offset and are not covered.
    std::mt19937_64 rng(57);
    std::uniform_int_distribution<std::uint64_t> half(5000, 500000);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint64_t> counts(2 + trial % 8);
        for (auto& x : counts) x = 2 * half(rng);
        const auto d = from_counts(counts);
        EXPECT_NEAR(grassberger_entropy(d).bits, naive_entropy(d).bits, 1e-6);
    }
}

TEST(Grassberger, SmallerMeanBiasThanNaiveOnUniformSources) {
    for (int ratio : {2, 5, 10}) {
        const int k = 3;
        const std::size_t m = 8;
        const std::size_t n_blocks = ratio * m;
        std::vector<double> g;
        std::vector<double> nv;
        for (int rep = 0; rep < 400; ++rep) {
            const auto s = iid(n_blocks * k, 0.5, 1000 * ratio + rep);
            const auto d = block_distribution(s, k);
            g.push_back(grassberger_entropy(d).bits - k);
            nv.push_back(naive_entropy(d).bits - k);
        }
        EXPECT_LT(std::abs(summarize(g).mean), std::abs(summarize(nv).mean)) << "N/M=" << ratio;
    }
}

TEST(Conditional, FirstOrderEqualsBlockEntropy) {
    const auto s = iid(10000, 0.3, 58);
    for (auto est : {Estimator::Naive, Estimator::Grassberger}) {
        EXPECT_EQ(conditional_entropy(s, 1, est).bits, block_entropy(block_distribution(s, 1), est).bits);
    }
}

TEST(Conditional, PeriodicStringByHandCount) {
    // "0101..." : order 1 has {0: n/2, 1: n/2} -> 1 bit; order 2 has the single block "01" -> 0 bits.
    std::string digits;
    for (int i = 0; i < 500; ++i) digits += "01";
    const auto s = from_digits(digits);
    EXPECT_DOUBLE_EQ(block_entropy(block_distribution(s, 1), Estimator::Naive).bits, 1.0);
    EXPECT_DOUBLE_EQ(block_entropy(block_distribution(s, 2), Estimator::Naive).bits, 0.0);
    EXPECT_DOUBLE_EQ(conditional_entropy(s, 2, Estimator::Naive).bits, 0.0 - 1.0);
}

TEST(Conditional, FairSourceNaiveNearOneBit) {
    std::vector<double> h;
    for (int rep = 0; rep < 100; ++rep) h.push_back(conditional_entropy(iid(100000, 0.5, 2000 + rep), 2, Estimator::Naive).bits);
    const auto st = summarize(h);
    EXPECT_LT(std::abs(st.mean - 1.0), 3.0 * st.sd);
}

TEST(Conditional, RejectsOrderZero) {
    EXPECT_THROW(conditional_entropy(from_digits("0101"), 0, Estimator::Naive), InputError);
}

TEST(Rescaled, BalancedSourceGivesBlockEntropyNearK) {
    for (int k : {2, 3, 5}) {
        std::vector<double> hb;
        for (int rep = 0; rep < 100; ++rep) {
            hb.push_back(rescaled_entropies(iid(60000, 0.5, 3000 + rep), k, Estimator::Grassberger).block.bits);
        }
        const auto st = summarize(hb);
        EXPECT_LT(std::abs(st.mean - k), 3.0 * st.sd + 1e-9) << "k=" << k;
    }
}

TEST(Rescaled, RemovesMarginalBias) {
    std::vector<double> h;
    for (int rep = 0; rep < 100; ++rep) {
        h.push_back(rescaled_entropies(iid(100000, 0.9, 4000 + rep), 2, Estimator::Grassberger).conditional.bits);
    }
    const auto st = summarize(h);
    EXPECT_LT(std::abs(st.mean - 1.0), 3.0 * st.sd);
    // Without rescaling the conditional entropy sits at the marginal entropy, far below 1.
    const double h09 = -(0.9 * std::log2(0.9) + 0.1 * std::log2(0.1));
    EXPECT_LT(h09, 0.5);
}

TEST(Rescaled, ConstantSeriesIsAnError) {
    EXPECT_THROW(rescaled_entropies(from_digits("0000000"), 2, Estimator::Naive), RescalingError);
    const std::vector<std::uint8_t> ones(100, 1);
    const std::vector<int> orders{2};
    EXPECT_THROW(rescaled_conditional_profile(ones, 2, orders, Estimator::Grassberger), RescalingError);
}

TEST(Rescaled, ProfileMatchesSingleOrderCalls) {
    const auto s = iid(50000, 0.45, 59, 2);
    const std::vector<int> orders{1, 2, 3, 6, 10};
    for (auto est : {Estimator::Naive, Estimator::Grassberger}) {
        const auto profile = rescaled_conditional_profile(s.symbols, 2, orders, est);
        for (std::size_t i = 0; i < orders.size(); ++i) {
            const auto r = rescaled_entropies(s, orders[i], est);
            EXPECT_DOUBLE_EQ(profile[i], r.conditional.bits);
            const double hk = conditional_entropy(s, orders[i], est).bits;
            const double h1 = block_entropy(block_distribution(s, 1), est).bits;
            EXPECT_DOUBLE_EQ(profile[i], hk / h1);
        }
    }
}

TEST(Estimator, NamesRoundTrip) {
    EXPECT_EQ(estimator_from_string(to_string(Estimator::Naive)), Estimator::Naive);
    EXPECT_EQ(estimator_from_string(to_string(Estimator::Grassberger)), Estimator::Grassberger);
    EXPECT_THROW(estimator_from_string("plugin"), InputError);
}
