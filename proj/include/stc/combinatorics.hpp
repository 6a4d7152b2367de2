#pragma once

#include <cstdint>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

/// Multiplicity vector (m_1,...,m_k) of a multiset over symbols 0..k-1.
struct MultisetSpec {
    std::vector<int> multiplicities;

    MultisetSpec() = default;
    explicit MultisetSpec(std::vector<int> m);

    int classes() const { return static_cast<int>(multiplicities.size()); }
    int total() const;

    bool operator==(const MultisetSpec&) const = default;
};

/// One arrangement of the multiset: symbols[i] in 0..k-1, symbol s appearing
/// exactly multiplicities[s] times.
using Permutation = std::vector<int>;

bool matches_spec(const Permutation& p, const MultisetSpec& spec);

/// Number of distinct multiset permutations, n!/(m_1!...m_k!).
/// Throws OverflowError if the result (or an intermediate) exceeds uint64.
std::uint64_t count_multiset_perms(const MultisetSpec& spec);

inline constexpr std::uint64_t kDefaultGrayGuard = 1'000'000;

/// All multiset permutations, each exactly once, ordered so that every
/// adjacent pair differs by exactly one transposition of two positions
/// holding distinct symbols.
///
/// Construction: the list is grouped by final symbol. The group of words
/// ending in symbol c is the recursive list for the sub-multiset with one c
/// removed, and the seam between consecutive groups is bridged by rewriting
/// one occurrence of the next group's final symbol, which turns the group
/// change into a single transposition against the last position. The first
/// word of the list is the ascending arrangement 0^(m_1) 1^(m_2) ... .
std::vector<Permutation> gen_gray_order(const MultisetSpec& spec,
                                        std::uint64_t max_perms = kDefaultGrayGuard);

/// N evenly spaced permutations: indices start, start+s, ..., start+(N-1)*s
/// with stride s = floor(M/N). Throws InvalidRateError if N > M, and
/// ResourceError if the last index falls outside the list.
std::vector<Permutation> select_evenly(const std::vector<Permutation>& perms,
                                       std::uint64_t n_select,
                                       std::uint64_t start = 0);

/// Minimum number of transpositions turning p into q, by breadth-first
/// search over arrangements. Test oracle; guarded to length <= 10.
int transposition_distance(const Permutation& p, const Permutation& q);

} // namespace stc
