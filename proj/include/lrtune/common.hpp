#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lrtune {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct ContractViolation : std::runtime_error {
    explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

struct MalformedTrace : std::runtime_error {
    MalformedTrace(const std::string& trace_id, long long breakpoint)
        : std::runtime_error("trace '" + trace_id + "' has no observation at breakpoint t=" +
                             std::to_string(breakpoint)),
          trace_id(trace_id), breakpoint(breakpoint) {}
    std::string trace_id;
    long long breakpoint;
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct NoInformativeExperiment : std::runtime_error {
    explicit NoInformativeExperiment(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractViolation(what);
}

// ---------------------------------------------------------------------------
// Hashing, used for seed derivation and config fingerprints
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent seed from a base seed, a component name and an index.
/// One global seed expands to all component streams through this function.
inline std::uint64_t derive_seed(std::uint64_t base, const std::string& component,
                                 std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(base ^ fnv1a64(component));
    return splitmix64(h ^ splitmix64(index + 0x51a2b3c4d5e6f708ULL));
}

// ---------------------------------------------------------------------------
// Rng: reproducible stream with a fully specified normal sampler.
// std::mt19937_64 output is pinned by the standard; the uniform and Gaussian
// transforms below avoid unspecified library distributions.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(splitmix64(seed)), has_spare_(false) {}

    std::uint64_t next_u64() {
        state_ = splitmix64(state_ ^ counter_++);
        return state_;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is fine here; n is always tiny vs 2^64.
        return next_u64() % n;
    }

    Rng fork(const std::string& name, std::uint64_t index = 0) {
        return Rng(derive_seed(state_, name, index));
    }

private:
    std::uint64_t state_;
    std::uint64_t counter_ = 0;
    bool has_spare_;
    double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Numeric helpers
// ---------------------------------------------------------------------------

/// Numerically stable softplus, log(1 + e^u).
inline double softplus(double u) {
    if (u > 0.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

/// Inverse of softplus, log(e^v - 1) for v > 0.
inline double softplus_inverse(double v) {
    if (v > 30.0) return v;  // e^-v below double resolution
    if (v <= 0.0) throw ContractViolation("softplus_inverse requires a positive argument");
    return std::log(std::expm1(v));
}

inline double logistic(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    double e = std::exp(u);
    return e / (1.0 + e);
}

/// Empirical quantile with linear interpolation between order statistics
/// (the common "type 7" convention). `sorted` must be ascending.
inline double quantile_sorted(const std::vector<double>& sorted, double alpha) {
    require(!sorted.empty(), "quantile of empty sample");
    if (sorted.size() == 1) return sorted[0];
    double h = (static_cast<double>(sorted.size()) - 1.0) * alpha;
    auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo >= sorted.size() - 1) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double alpha) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, alpha);
}

// ---------------------------------------------------------------------------
// parallel_for: deterministic results regardless of thread count, provided
// the body writes only to its own index slot.
// ---------------------------------------------------------------------------

inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    int workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lrtune
