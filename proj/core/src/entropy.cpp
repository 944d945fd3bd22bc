#include "hfentropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hfentropy/error.hpp"

namespace hfentropy::entropy {

std::string to_string(Estimator estimator) {
    return estimator == Estimator::Naive ? "naive" : "grassberger";
}

Estimator estimator_from_string(const std::string& name) {
    if (name == "naive") return Estimator::Naive;
    if (name == "grassberger") return Estimator::Grassberger;
    throw InputError("unknown estimator '" + name + "'");
}

std::string to_string(Kind kind) {
    switch (kind) {
        case Kind::Block: return "H";
        case Kind::Conditional: return "h";
        case Kind::RescaledBlock: return "H~";
        case Kind::RescaledConditional: return "h~";
    }
    return "?";
}

std::string BlockDistribution::block_string(std::uint64_t code) const {
    std::string s(static_cast<std::size_t>(k), '0');
    const auto base = static_cast<std::uint64_t>(alphabet_size);
    for (int i = k - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = static_cast<char>('0' + code % base);
        code /= base;
    }
    return s;
}

std::map<std::string, std::uint64_t> BlockDistribution::string_counts() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& [code, n] : counts) out.emplace(block_string(code), n);
    return out;
}

BlockDistribution block_distribution(std::span<const std::uint8_t> symbols, int alphabet_size, int k) {
    if (alphabet_size < 2) throw InputError("alphabet size must be at least 2");
    if (k < 1) throw InputError("block order must be at least 1");
    if (static_cast<std::size_t>(k) > symbols.size()) {
        throw InputError("block order " + std::to_string(k) + " exceeds the series length " +
                         std::to_string(symbols.size()));
    }
    if (k * std::log2(static_cast<double>(alphabet_size)) > 63.0) {
        throw InputError("block order too large to encode");
    }
    BlockDistribution d;
    d.k = k;
    d.alphabet_size = alphabet_size;
    const auto uk = static_cast<std::size_t>(k);
    const std::size_t n_blocks = symbols.size() / uk;
    d.n_blocks = n_blocks;
    d.sparse = static_cast<double>(k) > std::log2(static_cast<double>(symbols.size()));

    const auto base = static_cast<std::uint64_t>(alphabet_size);
    // Dense counting when the code space is small, which covers the usual orders.
    const double space = std::pow(static_cast<double>(alphabet_size), k);
    if (space <= 1 << 20) {
        std::vector<std::uint64_t> dense(static_cast<std::size_t>(space), 0);
        for (std::size_t b = 0; b < n_blocks; ++b) {
            std::uint64_t code = 0;
            for (std::size_t j = 0; j < uk; ++j) {
                const auto s = symbols[b * uk + j];
                if (s >= base) throw ValidationError("symbol exceeds the alphabet");
                code = code * base + s;
            }
            ++dense[code];
        }
        for (std::size_t c = 0; c < dense.size(); ++c) {
            if (dense[c] > 0) d.counts.emplace(c, dense[c]);
        }
    } else {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            std::uint64_t code = 0;
            for (std::size_t j = 0; j < uk; ++j) {
                const auto s = symbols[b * uk + j];
                if (s >= base) throw ValidationError("symbol exceeds the alphabet");
                code = code * base + s;
            }
            ++d.counts[code];
        }
    }
    return d;
}

BlockDistribution block_distribution(const SymbolSeries& series, int k) {
    return block_distribution(std::span<const std::uint8_t>(series.symbols), series.alphabet_size, k);
}

namespace {

void require_blocks(const BlockDistribution& d) {
    if (d.n_blocks == 0) throw InputError("entropy of an empty block distribution");
}

// Sum of non-negative terms in ascending order, for reproducible rounding.
double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    long double s = 0.0L;
    for (double t : terms) s += t;
    return static_cast<double>(s);
}

}  // namespace

EntropyEstimate naive_entropy(const BlockDistribution& distribution) {
    require_blocks(distribution);
    const auto n = static_cast<double>(distribution.n_blocks);
    std::vector<double> terms;
    terms.reserve(distribution.counts.size());
    for (const auto& [code, c] : distribution.counts) {
        const double p = static_cast<double>(c) / n;
        terms.push_back(-p * std::log2(p));
    }
    return {Estimator::Naive, Kind::Block, distribution.k, sorted_sum(terms), distribution.n_blocks};
}

double grassberger_g(std::uint64_t n) {
    const std::uint64_t m = n / 2;
    long double s = 0.0L;
    for (std::uint64_t j = 1; j <= m; ++j) s += 2.0L / static_cast<long double>(2 * j - 1);
    return static_cast<double>(-std::numbers::egamma_v<long double> - std::numbers::ln2_v<long double> + s);
}

EntropyEstimate grassberger_entropy(const BlockDistribution& distribution) {
    require_blocks(distribution);
    std::uint64_t max_count = 0;
    for (const auto& [code, c] : distribution.counts) max_count = std::max(max_count, c);

    // Walk the series once, capturing G at every count that occurs.
    std::vector<std::uint64_t> needed;
    needed.reserve(distribution.counts.size());
    for (const auto& [code, c] : distribution.counts) needed.push_back(c / 2);
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

    std::map<std::uint64_t, long double> g_by_half;
    long double partial = 0.0L;
    std::uint64_t j = 0;
    for (std::uint64_t m : needed) {
        while (j < m) {
            ++j;
            partial += 2.0L / static_cast<long double>(2 * j - 1);
        }
        g_by_half[m] = -std::numbers::egamma_v<long double> - std::numbers::ln2_v<long double> + partial;
    }

    const auto n = static_cast<long double>(distribution.n_blocks);
    long double weighted = 0.0L;
    for (const auto& [code, c] : distribution.counts) {
        weighted += static_cast<long double>(c) * g_by_half[c / 2];
    }
    const long double nats = std::log(n) - weighted / n;
    const double bits = static_cast<double>(nats / std::numbers::ln2_v<long double>);
    return {Estimator::Grassberger, Kind::Block, distribution.k, bits, distribution.n_blocks};
}

EntropyEstimate block_entropy(const BlockDistribution& distribution, Estimator estimator) {
    return estimator == Estimator::Naive ? naive_entropy(distribution) : grassberger_entropy(distribution);
}

namespace {

double block_bits(std::span<const std::uint8_t> symbols, int alphabet, int k, Estimator est) {
    return block_entropy(block_distribution(symbols, alphabet, k), est).bits;
}

}  // namespace

EntropyEstimate conditional_entropy(const SymbolSeries& series, int k, Estimator estimator) {
    if (k < 1) throw InputError("conditional entropy order must be at least 1");
    const auto hk = block_entropy(block_distribution(series, k), estimator);
    EntropyEstimate out = hk;
    out.kind = Kind::Conditional;
    if (k > 1) out.bits = hk.bits - block_bits(series.symbols, series.alphabet_size, k - 1, estimator);
    return out;
}

RescaledEntropies rescaled_entropies(const SymbolSeries& series, int k, Estimator estimator) {
    if (k < 1) throw InputError("entropy order must be at least 1");
    const auto d1 = block_distribution(series, 1);
    if (d1.counts.size() < 2) {
        throw RescalingError("rescaled entropies are undefined for a single-symbol series");
    }
    const auto h1 = block_entropy(d1, estimator);
    const auto hk = block_entropy(block_distribution(series, k), estimator);
    const double hk_prev = k > 1 ? block_bits(series.symbols, series.alphabet_size, k - 1, estimator) : 0.0;

    RescaledEntropies out;
    out.block = hk;
    out.block.kind = Kind::RescaledBlock;
    out.block.bits = hk.bits / h1.bits;
    out.conditional = hk;
    out.conditional.kind = Kind::RescaledConditional;
    out.conditional.bits = (k > 1 ? hk.bits - hk_prev : hk.bits) / h1.bits;
    return out;
}

std::vector<double> rescaled_conditional_profile(std::span<const std::uint8_t> symbols, int alphabet_size,
                                                 std::span<const int> orders, Estimator estimator) {
    const auto d1 = block_distribution(symbols, alphabet_size, 1);
    if (d1.counts.size() < 2) {
        throw RescalingError("rescaled entropies are undefined for a single-symbol series");
    }
    const double h1 = block_entropy(d1, estimator).bits;

    std::map<int, double> cache{{1, h1}};
    auto h_at = [&](int k) {
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        const double v = block_bits(symbols, alphabet_size, k, estimator);
        cache.emplace(k, v);
        return v;
    };

    std::vector<double> out;
    out.reserve(orders.size());
    for (int k : orders) {
        if (k < 1) throw InputError("entropy order must be at least 1");
        const double hk = h_at(k);
        out.push_back((k > 1 ? hk - h_at(k - 1) : hk) / h1);
    }
    return out;
}

}  // namespace hfentropy::entropy
