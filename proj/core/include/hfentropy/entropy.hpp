#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hfentropy/types.hpp"

namespace hfentropy::entropy {

enum class Estimator { Naive, Grassberger };
enum class Kind { Block, Conditional, RescaledBlock, RescaledConditional };

std::string to_string(Estimator estimator);
Estimator estimator_from_string(const std::string& name);
std::string to_string(Kind kind);

/// Counts of the non-overlapping k-blocks x_{ik+1..ik+k}, i = 0 .. floor(n/k) - 1.
/// Blocks are keyed by their base-`alphabet_size` code, first symbol most significant.
struct BlockDistribution {
    int k = 1;
    int alphabet_size = 2;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t n_blocks = 0;
    /// k exceeds log2 of the series length: too few blocks for reliable estimates.
    bool sparse = false;

    std::string block_string(std::uint64_t code) const;
    std::map<std::string, std::uint64_t> string_counts() const;
};

/// Throws InputError when k < 1 or k > symbols.size().
BlockDistribution block_distribution(std::span<const std::uint8_t> symbols, int alphabet_size, int k);
BlockDistribution block_distribution(const SymbolSeries& series, int k);

struct EntropyEstimate {
    Estimator estimator = Estimator::Grassberger;
    Kind kind = Kind::Block;
    int k = 1;
    double bits = 0.0;
    std::uint64_t n_blocks = 0;
};

/// Plug-in entropy of the block frequencies, in bits.
EntropyEstimate naive_entropy(const BlockDistribution& distribution);

/// G_n with G_{2m} = G_{2m+1} = -gamma - ln 2 + sum_{j=1}^{m} 2 / (2j - 1).
double grassberger_g(std::uint64_t n);

/// H^G = ln N - (1/N) sum n_i G_{n_i}, reported in bits.
EntropyEstimate grassberger_entropy(const BlockDistribution& distribution);

EntropyEstimate block_entropy(const BlockDistribution& distribution, Estimator estimator);

/// h_k = H_k - H_{k-1} with each order estimated on its own distribution; h_1 = H_1.
EntropyEstimate conditional_entropy(const SymbolSeries& series, int k, Estimator estimator);

struct RescaledEntropies {
    EntropyEstimate block;        ///< H~_k = H_k / H_1
    EntropyEstimate conditional;  ///< h~_k = h_k / H_1
};

/// Throws RescalingError when the series uses a single symbol.
RescaledEntropies rescaled_entropies(const SymbolSeries& series, int k, Estimator estimator);

/// h~_k for several orders sharing one H_1 and one pass per order.
/// Returns values aligned with `orders`.
std::vector<double> rescaled_conditional_profile(std::span<const std::uint8_t> symbols, int alphabet_size,
                                                 std::span<const int> orders, Estimator estimator);

}  // namespace hfentropy::entropy
