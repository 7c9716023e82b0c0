#pragma once

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace speiser_lab {

// ── Fits ────────────────────────────────────────────────────────────

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
    double rss = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 points.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

enum class Trend { divergent, convergent, inconclusive };

/// Model comparison behind every type verdict. The convergent model is
/// y = C - b * rho^x with rho scanned over (0, 0.8]; the divergent model is
/// the better of y = a + c*x and y = a + c*ln x (either may be disabled).
/// A verdict needs >= 3 points and a residual ratio of at least 2; when both
/// residuals are negligible the data cannot tell the models apart.
struct TrendFit {
    Trend verdict = Trend::inconclusive;
    double rss_divergent = 0.0;
    double rss_convergent = 0.0;
    std::string divergent_model;  // "linear" or "log"
    double divergent_slope = 0.0;
    double limit = 0.0;  // C of the convergent model
    double rho = 0.0;
    std::string reason;
};

TrendFit classify_trend(const std::vector<double>& x, const std::vector<double>& y, bool allow_linear = true,
                        bool allow_log = true);

const char* trend_name(Trend t);

nlohmann::json to_json(const TrendFit& f);

/// Finite numbers as JSON numbers, infinities as "inf" / "-inf".
nlohmann::json json_real(double x);

// ── Random numbers ──────────────────────────────────────────────────

std::uint64_t splitmix64(std::uint64_t& state);

/// Independent stream `stream` derived from the master seed.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// ── Parallelism ─────────────────────────────────────────────────────

/// Worker count: SPEISER_LAB_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

/// Runs f(i) for i in [0, n). Results must not depend on scheduling; the
/// first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace speiser_lab
