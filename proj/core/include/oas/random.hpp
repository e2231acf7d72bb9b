#pragma once

#include <cstdint>
#include <random>

namespace oas {

// Every stochastic routine takes one of these by reference. Streams are never
// shared between concurrent trials.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent stream identified by a counter tuple.
///
/// The tuple (master, a, b, c) is folded through SplitMix64 one word at a
/// time: s = mix(master); s = mix(s ^ a); s = mix(s ^ b); s = mix(s ^ c).
/// The experiment runner uses (master, rho index, m index or stream tag,
/// trial index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace oas
