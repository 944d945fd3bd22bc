#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace hfentropy {

using Rng = std::mt19937_64;

/// Seed for an independent stream identified by (master, stream, index).
/// Replica i of a Monte Carlo study uses derive_seed(master, study, i), so
/// replicas can be generated in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

/// 64-bit FNV-1a of a byte string; stable across platforms.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace hfentropy
