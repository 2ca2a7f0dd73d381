#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace mobnil::par {

// Terms per leaf of the reduction tree.
inline constexpr std::int64_t kChunk = std::int64_t{1} << 14;

namespace detail {
inline std::atomic<int>& thread_setting() {
    static std::atomic<int> value{0};
    return value;
}
}  // namespace detail

// 0 selects the hardware concurrency.
inline void set_threads(int n) { detail::thread_setting().store(n < 0 ? 0 : n); }

inline int threads() {
    int n = detail::thread_setting().load();
    if (n <= 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
    }
    return n <= 0 ? 1 : n;
}

// Runs fn(b) for every block b in [0, nblocks). Blocks are dealt round-robin,
// so the assignment never affects what each block computes.
template <class Fn>
void for_blocks(std::int64_t nblocks, Fn&& fn, int nthreads = threads()) {
    if (nblocks <= 0) return;
    const int workers = static_cast<int>(std::min<std::int64_t>(std::max(1, nthreads), nblocks));
    if (workers == 1) {
        for (std::int64_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t b = w; b < nblocks; b += workers) fn(b);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Fixed-shape pairwise sum: the tree depends only on n.
template <class T>
T pairwise(const T* v, std::size_t n) {
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = v[0];
        for (std::size_t i = 1; i < n; ++i) acc += v[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise(v, half) + pairwise(v + half, n - half);
}

// Sum of term(i) for i in [lo, hi). Chunks of kChunk terms are reduced
// pairwise, then the chunk totals are reduced pairwise, so the result is
// bit-identical for every thread count.
template <class T, class Term>
T sum(std::int64_t lo, std::int64_t hi, Term&& term, int nthreads = threads()) {
    if (hi <= lo) return T{};
    const std::int64_t count = hi - lo;
    const std::int64_t nchunks = (count + kChunk - 1) / kChunk;
    std::vector<T> partial(static_cast<std::size_t>(nchunks));
    for_blocks(nchunks, [&](std::int64_t c) {
        const std::int64_t a = lo + c * kChunk;
        const std::int64_t b = std::min(hi, a + kChunk);
        std::vector<T> buf(static_cast<std::size_t>(b - a));
        for (std::int64_t i = a; i < b; ++i) buf[static_cast<std::size_t>(i - a)] = term(i);
        partial[static_cast<std::size_t>(c)] = pairwise(buf.data(), buf.size());
    }, nthreads);
    return pairwise(partial.data(), partial.size());
}

}  // namespace mobnil::par
