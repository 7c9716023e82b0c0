#include "speiser_lab/numeric.h"

#include "speiser_lab/error.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace speiser_lab {

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("fit_linear: need two or more paired points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        f.rss += r * r;
    }
    f.r2 = syy > 0 ? 1.0 - f.rss / syy : 1.0;
    return f;
}

TrendFit classify_trend(const std::vector<double>& x, const std::vector<double>& y, bool allow_linear, bool allow_log) {
    TrendFit t;
    if (x.size() != y.size()) throw InputError("classify_trend: size mismatch");
    if (x.size() < 3) {
        t.reason = "fewer than 3 points";
        return t;
    }
    double scale = 0.0;
    for (double v : y) scale += v * v;

    t.rss_divergent = INFINITY;
    if (allow_linear) {
        const LinearFit f = fit_linear(x, y);
        t.rss_divergent = f.rss;
        t.divergent_model = "linear";
        t.divergent_slope = f.slope;
    }
    if (allow_log && std::all_of(x.begin(), x.end(), [](double v) { return v > 0; })) {
        std::vector<double> lx(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i]);
        const LinearFit f = fit_linear(lx, y);
        if (f.rss < t.rss_divergent) {
            t.rss_divergent = f.rss;
            t.divergent_model = "log";
            t.divergent_slope = f.slope;
        }
    }
    // y = C - b rho^x is linear in (C, b) for fixed rho.
    t.rss_convergent = INFINITY;
    const double x0 = x.front();
    for (int i = 1; i <= 160; ++i) {
        const double rho = 0.005 * i;
        std::vector<double> z(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) z[k] = -std::pow(rho, x[k] - x0);
        const LinearFit f = fit_linear(z, y);
        if (f.rss < t.rss_convergent) {
            t.rss_convergent = f.rss;
            t.rho = rho;
            t.limit = f.intercept;
        }
    }
    const double tiny = 1e-12 * std::max(scale, 1e-300);
    if (t.rss_divergent <= tiny && t.rss_convergent <= tiny) {
        t.reason = "both models fit exactly";
        return t;
    }
    if (t.rss_convergent * 2.0 <= t.rss_divergent) {
        t.verdict = Trend::convergent;
        t.reason = "convergent model residual at least 2x smaller";
    } else if (t.rss_divergent * 2.0 <= t.rss_convergent) {
        t.verdict = Trend::divergent;
        t.reason = "divergent model residual at least 2x smaller";
    } else {
        t.reason = "residual ratio below 2";
    }
    return t;
}

const char* trend_name(Trend t) {
    switch (t) {
        case Trend::divergent: return "divergent";
        case Trend::convergent: return "convergent";
        default: return "inconclusive";
    }
}

nlohmann::json json_real(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

nlohmann::json to_json(const TrendFit& f) {
    return {{"verdict", trend_name(f.verdict)},
            {"rss_divergent", json_real(f.rss_divergent)},
            {"rss_convergent", json_real(f.rss_convergent)},
            {"divergent_model", f.divergent_model},
            {"divergent_slope", f.divergent_slope},
            {"convergent_limit", f.limit},
            {"convergent_rho", f.rho},
            {"reason", f.reason}};
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s))};
    return std::mt19937_64(seq);
}

unsigned thread_count() {
    if (const char* env = std::getenv("SPEISER_LAB_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace speiser_lab
