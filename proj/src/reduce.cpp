#include "qpc/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qpc {

namespace {

double pairwise_rec(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}

// two_sum: a + b = s + err exactly.
inline double two_sum(double a, double b, double& err) {
    double s = a + b;
    double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
}

} // namespace

double pairwise_sum(std::span<const double> v) {
    return pairwise_rec(v.data(), v.size());
}

double exact_sum(std::span<const double> v) {
    // Maintain a non-overlapping expansion of the running sum.
    std::vector<double> parts;
    for (double x : v) {
        std::size_t keep = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            double err;
            double s = two_sum(x, parts[i], err);
            if (err != 0.0) parts[keep++] = err;
            x = s;
        }
        parts.resize(keep);
        if (x != 0.0) parts.push_back(x);
    }
    double total = 0.0;
    for (double p : parts) total += p;
    return total;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        if (n > 0) fn(0, n);
        return;
    }
    unsigned t = std::min<std::size_t>(threads, n);
    std::size_t chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned w = 0; w < t; ++w) {
        std::size_t b = std::min(n, w * chunk);
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

unsigned resolve_threads(unsigned override_count) {
    if (override_count > 0) return override_count;
    if (const char* env = std::getenv("QPC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

} // namespace qpc
