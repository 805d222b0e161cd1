#pragma once

// Small numeric utilities used across the library: deterministic pairwise
// summation, thread-count policy, fixed-format float printing. Every sum that
// feeds a reported number goes through the pairwise accumulator so results do
// not depend on chunking or thread count.

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dlab {

using Complex = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Binary-counter pairwise accumulator: value pushed i-th is combined along a
// fixed binary tree, so the rounding pattern depends only on the push order.
template <typename T>
class PairwiseAccumulator {
public:
    void add(T v) {
        unsigned level = 0;
        while (level < filled_.size() && filled_[level]) {
            v += partial_[level];
            filled_[level] = 0;
            ++level;
        }
        if (level == filled_.size()) {
            partial_.push_back(v);
            filled_.push_back(1);
        } else {
            partial_[level] = v;
            filled_[level] = 1;
        }
    }

    T total() const {
        T s{};
        for (std::size_t i = 0; i < filled_.size(); ++i)
            if (filled_[i]) s += partial_[i];
        return s;
    }

private:
    std::vector<T> partial_;
    std::vector<unsigned char> filled_;
};

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
    PairwiseAccumulator<T> acc;
    for (const T& x : xs) acc.add(x);
    return acc.total();
}

// Worker cap: DISPERSIVE_LAB_THREADS when set (0 or garbage degrade to 1),
// otherwise the hardware concurrency.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("DISPERSIVE_LAB_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) return 1;
        return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

// Index-parallel loop with deterministic output: body(i) must write only to
// slot i of preallocated storage. The first exception wins and is rethrown.
template <typename F>
void parallel_for(std::size_t count, F&& body) {
    unsigned workers = thread_cap();
    if (workers > count) workers = static_cast<unsigned>(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// 17 significant digits: enough to round-trip any double, same string on
// every run.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Refinement {
    double value = 0.0;
    double last_delta = 0.0;
    std::size_t points = 0;
    bool converged = false;
};

// Midpoint-rule integral over [a, b] with doubling refinement. Samples sit at
// a + (j + 1/2 + offset)*h with |offset| < 1/2, so the endpoints are never
// evaluated; callers exploit this to skirt integrable singularities. Stops
// once a doubling moves the value by no more than rtol relative (converged)
// or at the point cap (best value returned, converged stays false).
template <typename F>
Refinement refine_midpoint(F&& f, double a, double b, double offset = 0.0,
                           std::size_t m0 = 32, std::size_t cap = 8192,
                           double rtol = 1e-9) {
    Refinement r;
    bool have_prev = false;
    double prev = 0.0;
    for (std::size_t m = m0; m <= cap; m *= 2) {
        const double h = (b - a) / static_cast<double>(m);
        PairwiseAccumulator<double> acc;
        for (std::size_t j = 0; j < m; ++j)
            acc.add(f(a + (static_cast<double>(j) + 0.5 + offset) * h));
        r.value = acc.total() * h;
        r.points = m;
        if (have_prev) {
            r.last_delta = std::abs(r.value - prev);
            if (r.last_delta <= rtol * (std::abs(r.value) + 1e-300)) {
                r.converged = true;
                return r;
            }
        }
        prev = r.value;
        have_prev = true;
    }
    return r;
}

}  // namespace dlab
