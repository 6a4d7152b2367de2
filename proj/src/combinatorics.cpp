#include "stc/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace stc {

MultisetSpec::MultisetSpec(std::vector<int> m) : multiplicities(std::move(m)) {
    if (multiplicities.empty())
        throw Error("MultisetSpec: need at least one symbol class");
    for (int mi : multiplicities)
        if (mi < 1) throw Error("MultisetSpec: every multiplicity must be >= 1");
}

int MultisetSpec::total() const {
    return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

bool matches_spec(const Permutation& p, const MultisetSpec& spec) {
    std::vector<int> hist(spec.classes(), 0);
    for (int s : p) {
        if (s < 0 || s >= spec.classes()) return false;
        ++hist[s];
    }
    return hist == spec.multiplicities;
}

std::uint64_t count_multiset_perms(const MultisetSpec& spec) {
    // Product of binomials C(m_1+...+m_i, m_i); each C(n,k) is built up by
    // exact multiply-then-divide steps, so intermediate values stay within
    // binom * n. Checked in 128-bit, error on 64-bit overflow.
    constexpr auto u64max = static_cast<unsigned __int128>(UINT64_MAX);
    std::uint64_t result = 1;
    std::uint64_t n = 0;
    for (int mi : spec.multiplicities) {
        n += static_cast<std::uint64_t>(mi);
        std::uint64_t binom = 1;
        for (std::uint64_t j = 1; j <= static_cast<std::uint64_t>(mi); ++j) {
            unsigned __int128 t = static_cast<unsigned __int128>(binom) * (n - mi + j);
            if (t > u64max * j)
                throw OverflowError("count_multiset_perms: exceeds 64-bit range");
            binom = static_cast<std::uint64_t>(t / j); // exact: C(n',j) update
        }
        unsigned __int128 r = static_cast<unsigned __int128>(result) * binom;
        if (r > u64max)
            throw OverflowError("count_multiset_perms: exceeds 64-bit range");
        result = static_cast<std::uint64_t>(r);
    }
    return result;
}

namespace {

// All arrangements of the multiset of `start`, beginning at `start`, adjacent
// arrangements one transposition apart. See gen_gray_order docs for the
// invariant maintained at group seams.
void gray_recurse(const Permutation& start, std::vector<Permutation>& out) {
    const std::size_t n = start.size();
    if (n == 1) {
        out.push_back(start);
        return;
    }
    std::map<int, int> hist;
    for (int s : start) ++hist[s];

    const int first_sym = start.back();
    std::vector<int> group_syms{first_sym};
    for (const auto& [sym, cnt] : hist)
        if (sym != first_sym) group_syms.push_back(sym);

    Permutation inner_start(start.begin(), start.end() - 1);
    int prev_sym = first_sym;
    for (std::size_t g = 0; g < group_syms.size(); ++g) {
        const int sym = group_syms[g];
        if (g > 0) {
            // Bridge: rewrite one `sym` in the previous group's last inner
            // word to prev_sym. Together with the final-position change this
            // is a single transposition between consecutive output words.
            Permutation bridged = out.back();
            bridged.pop_back();
            auto it = std::find(bridged.begin(), bridged.end(), sym);
            *it = prev_sym;
            inner_start = std::move(bridged);
        }
        std::vector<Permutation> inner;
        gray_recurse(inner_start, inner);
        for (auto& w : inner) {
            w.push_back(sym);
            out.push_back(std::move(w));
        }
        prev_sym = sym;
    }
}

} // namespace

std::vector<Permutation> gen_gray_order(const MultisetSpec& spec, std::uint64_t max_perms) {
    const std::uint64_t m = count_multiset_perms(spec);
    if (m > max_perms)
        throw ResourceError("gen_gray_order: " + std::to_string(m) +
                            " permutations exceed guard of " + std::to_string(max_perms));
    Permutation start;
    start.reserve(static_cast<std::size_t>(spec.total()));
    for (int sym = 0; sym < spec.classes(); ++sym)
        start.insert(start.end(), static_cast<std::size_t>(spec.multiplicities[sym]), sym);

    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(m));
    gray_recurse(start, out);
    return out;
}

std::vector<Permutation> select_evenly(const std::vector<Permutation>& perms,
                                       std::uint64_t n_select, std::uint64_t start) {
    const std::uint64_t m = perms.size();
    if (n_select < 1 || n_select > m)
        throw InvalidRateError("select_evenly: need 1 <= N <= M, got N=" +
                               std::to_string(n_select) + " M=" + std::to_string(m));
    const std::uint64_t stride = m / n_select;
    if (start + (n_select - 1) * stride >= m)
        throw ResourceError("select_evenly: start offset overruns the list");
    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(n_select));
    for (std::uint64_t i = 0; i < n_select; ++i)
        out.push_back(perms[static_cast<std::size_t>(start + i * stride)]);
    return out;
}

int transposition_distance(const Permutation& p, const Permutation& q) {
    if (p.size() != q.size())
        throw DomainMismatchError("transposition_distance: different lengths");
    {
        Permutation a = p, b = q;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            throw DomainMismatchError("transposition_distance: different multisets");
    }
    if (p.size() > 10)
        throw ResourceError("transposition_distance: BFS oracle limited to n <= 10");
    if (p == q) return 0;

    const std::size_t n = p.size();
    std::map<Permutation, int> dist{{p, 0}};
    std::queue<Permutation> frontier;
    frontier.push(p);
    while (!frontier.empty()) {
        Permutation cur = std::move(frontier.front());
        frontier.pop();
        const int d = dist[cur];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (cur[i] == cur[j]) continue;
                std::swap(cur[i], cur[j]);
                if (cur == q) return d + 1;
                if (dist.emplace(cur, d + 1).second) frontier.push(cur);
                std::swap(cur[i], cur[j]);
            }
        }
    }
    throw Error("transposition_distance: target unreachable"); // cannot happen
}

} // namespace stc
