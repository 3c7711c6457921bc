#include "sentivol/decompose.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/error.hpp"
#include "sentivol/spline.hpp"
#include "sentivol/stats.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

namespace sentivol::decompose {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Fft: return "fft";
    case Method::Emd: return "emd";
    case Method::Ma: return "ma";
    }
    return "unknown";
}

std::string DecompositionResult::params_hash() const {
    std::string canonical = "method=" + std::string(to_string(method));
    for (const auto& [key, value] : params) {
        canonical += ";" + key + "=" + value;
    }
    return fnv1a_hex(canonical);
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> forward_dft(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> inverse_dft(std::vector<std::complex<double>> spectrum, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spectrum.data()), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    for (double& v : out) {
        v /= static_cast<double>(n);
    }
    return out;
}

std::vector<double> demeaned(std::span<const double> x, double& mean_out) {
    mean_out = stats::mean(x);
    std::vector<double> y(x.begin(), x.end());
    for (double& v : y) {
        v -= mean_out;
    }
    return y;
}

} // namespace

Spectrum amplitude_spectrum(std::span<const double> values) {
    double mean = 0.0;
    const auto y = demeaned(values, mean);
    const auto spec = forward_dft(y);
    const int n = static_cast<int>(values.size());
    Spectrum out;
    for (int k = 1; k <= n / 2; ++k) {
        out.bin.push_back(k);
        out.period.push_back(static_cast<double>(n) / k);
        // One-sided: a tone of amplitude A reads A; the Nyquist bin has no mirror.
        const double fold = 2 * k == n ? 1.0 : 2.0;
        out.amplitude.push_back(fold * std::abs(spec[static_cast<std::size_t>(k)]) / n);
    }
    return out;
}

DecompositionResult fft_split(const SentimentSeries& series, const FftConfig& config) {
    series.validate();
    const int n = static_cast<int>(series.size());
    const double min_period = config.auto_cutoff ? config.auto_max_period : config.cutoff_period;
    if (!(config.cutoff_period > 0.0) || n < 4.0 * min_period) {
        fail(ErrorCode::SeriesTooShort, std::to_string(n) + " observations for cutoff period " +
                                            format_double(min_period));
    }
    double mean = 0.0;
    const auto y = demeaned(series.values, mean);
    const auto spectrum = forward_dft(y);
    const int bins = n / 2 + 1;

    // First high-frequency bin.
    int split = 0;
    if (config.auto_cutoff) {
        const int k_lo = std::max(1, static_cast<int>(std::ceil(n / config.auto_max_period)));
        const int k_hi = std::min(bins - 1, static_cast<int>(std::floor(n / config.auto_min_period)));
        split = k_lo;
        double best = std::abs(spectrum[static_cast<std::size_t>(k_lo)]);
        for (int k = k_lo + 1; k <= k_hi; ++k) {
            const double a = std::abs(spectrum[static_cast<std::size_t>(k)]);
            if (a < best) {
                best = a;
                split = k;
            }
        }
    } else {
        split = static_cast<int>(std::floor(n / config.cutoff_period)) + 1;
        while (split > 1 && (split - 1) * config.cutoff_period > n) {
            --split;
        }
    }

    std::vector<std::complex<double>> high(spectrum.size(), 0.0);
    std::vector<std::complex<double>> low(spectrum.size(), 0.0);
    for (int k = 1; k < bins; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        (k >= split ? high : low)[idx] = spectrum[idx];
    }
    const auto hfs = inverse_dft(high, n);
    auto lfs = inverse_dft(low, n);
    for (double& v : lfs) {
        v += mean;
    }

    DecompositionResult result;
    result.method = Method::Fft;
    result.hfs = SentimentSeries{series.label + ":hfs", series.dates, hfs};
    result.lfs = SentimentSeries{series.label + ":lfs", series.dates, std::move(lfs)};
    result.params["split_bin"] = std::to_string(split);
    result.params["cutoff_period"] = config.auto_cutoff ? "auto" : format_double(config.cutoff_period);
    result.params["effective_period"] = format_double(static_cast<double>(n) / split);

    if (config.extreme_low_period) {
        std::vector<std::complex<double>> elf(spectrum.size(), 0.0);
        for (int k = 1; k < bins; ++k) {
            if (k * *config.extreme_low_period <= n) {
                elf[static_cast<std::size_t>(k)] = spectrum[static_cast<std::size_t>(k)];
            }
        }
        auto band = inverse_dft(elf, n);
        for (double& v : band) {
            v += mean;
        }
        result.extreme_low = SentimentSeries{series.label + ":elf", series.dates, std::move(band)};
        result.params["extreme_low_period"] = format_double(*config.extreme_low_period);
    }
    return result;
}

namespace {

struct Extrema {
    std::vector<double> max_pos;
    std::vector<double> max_val;
    std::vector<double> min_pos;
    std::vector<double> min_val;
};

// Local extrema; a flat run counts once, at its centre, when both neighbours
// lie on the same side.
Extrema find_extrema(std::span<const double> x) {
    Extrema e;
    const std::size_t n = x.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        std::size_t j = i;
        while (j + 1 < n && x[j + 1] == x[i]) {
            ++j;
        }
        if (j + 1 >= n) {
            break;
        }
        const double left = x[i - 1];
        const double right = x[j + 1];
        const double pos = 0.5 * static_cast<double>(i + j);
        if (x[i] > left && x[i] > right) {
            e.max_pos.push_back(pos);
            e.max_val.push_back(x[i]);
        } else if (x[i] < left && x[i] < right) {
            e.min_pos.push_back(pos);
            e.min_val.push_back(x[i]);
        }
        i = j + 1;
    }
    return e;
}

// Natural-spline envelope through extrema mirrored about both end samples.
// Extrema are interior, so mirrored abscissae never collide with real ones.
std::vector<double> envelope(const std::vector<double>& pos, const std::vector<double>& val, std::size_t n) {
    const double last = static_cast<double>(n - 1);
    const std::size_t m = pos.size();
    const std::size_t depth = std::min<std::size_t>(2, m);
    std::vector<double> px;
    std::vector<double> py;
    for (std::size_t k = depth; k-- > 0;) {
        px.push_back(-pos[k]);
        py.push_back(val[k]);
    }
    px.insert(px.end(), pos.begin(), pos.end());
    py.insert(py.end(), val.begin(), val.end());
    for (std::size_t k = 0; k < depth; ++k) {
        px.push_back(2.0 * last - pos[m - 1 - k]);
        py.push_back(val[m - 1 - k]);
    }
    const CubicSpline spline(px, py, CubicSpline::Extrapolation::Extend);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = spline(static_cast<double>(t));
    }
    return out;
}

} // namespace

int count_extrema(std::span<const double> x) {
    const Extrema e = find_extrema(x);
    return static_cast<int>(e.max_pos.size() + e.min_pos.size());
}

int count_zero_crossings(std::span<const double> x) {
    int count = 0;
    int last_sign = 0;
    for (double v : x) {
        const int s = (v > 0.0) - (v < 0.0);
        if (s == 0) {
            continue;
        }
        if (last_sign != 0 && s != last_sign) {
            ++count;
        }
        last_sign = s;
    }
    return count;
}

ImfSet emd(const SentimentSeries& series, const EmdConfig& config) {
    series.validate();
    const std::size_t n = series.size();
    if (n < 16) {
        fail(ErrorCode::TooShort, std::to_string(n) + " observations, need >= 16");
    }
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    if (*lo == *hi) {
        fail(ErrorCode::ConstantSeries, series.label);
    }
    double scale = 0.0;
    for (double v : series.values) {
        scale = std::max(scale, std::abs(v));
    }

    ImfSet out;
    out.dates = series.dates;
    std::vector<double> residual = series.values;
    while (static_cast<int>(out.imfs.size()) < config.max_imf) {
        if (count_extrema(residual) < 3) {
            break;
        }
        double res_scale = 0.0;
        for (double v : residual) {
            res_scale = std::max(res_scale, std::abs(v));
        }
        if (res_scale <= 1e-12 * scale) {
            break;
        }

        std::vector<double> h = residual;
        int iterations = 0;
        while (iterations < config.max_sift_iterations) {
            const Extrema e = find_extrema(h);
            if (e.max_pos.empty() || e.min_pos.empty()) {
                break;
            }
            const auto upper = envelope(e.max_pos, e.max_val, n);
            const auto lower = envelope(e.min_pos, e.min_val, n);
            std::vector<double> next(n);
            double num = 0.0;
            double den = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                next[t] = h[t] - 0.5 * (upper[t] + lower[t]);
                num += (h[t] - next[t]) * (h[t] - next[t]);
                den += h[t] * h[t];
            }
            h = std::move(next);
            ++iterations;
            const double sd = den > 0.0 ? num / den : 0.0;
            const int extrema = count_extrema(h);
            const int crossings = count_zero_crossings(h);
            if (sd < config.sift_tolerance && std::abs(extrema - crossings) <= 1) {
                break;
            }
        }
        for (std::size_t t = 0; t < n; ++t) {
            residual[t] -= h[t];
        }
        out.imfs.push_back(std::move(h));
        out.sift_iterations.push_back(iterations);
    }
    out.residual = std::move(residual);
    return out;
}

int auto_imf_split(const ImfSet& imfs, double alpha) {
    for (std::size_t i = 0; i < imfs.count(); ++i) {
        if (stats::t_test_mean_zero(imfs.imfs[i]) < alpha) {
            return std::max(1, static_cast<int>(i));
        }
    }
    return static_cast<int>(imfs.count());
}

DecompositionResult emd_split(const ImfSet& imfs, std::optional<int> k) {
    const int split = k ? *k : auto_imf_split(imfs);
    if (split < 0 || static_cast<std::size_t>(split) > imfs.count()) {
        fail(ErrorCode::TooFewImfs, "requested " + std::to_string(split) + " of " + std::to_string(imfs.count()) + " IMFs");
    }
    const std::size_t n = imfs.residual.size();
    std::vector<double> high(n, 0.0);
    std::vector<double> low = imfs.residual;
    for (std::size_t i = 0; i < imfs.count(); ++i) {
        auto& target = static_cast<int>(i) < split ? high : low;
        for (std::size_t t = 0; t < n; ++t) {
            target[t] += imfs.imfs[i][t];
        }
    }
    DecompositionResult result;
    result.method = Method::Emd;
    result.hfs = SentimentSeries{"emd:hfs", imfs.dates, std::move(high)};
    result.lfs = SentimentSeries{"emd:lfs", imfs.dates, std::move(low)};
    result.params["k"] = k ? std::to_string(*k) : "auto";
    result.params["k_used"] = std::to_string(split);
    result.params["imf_count"] = std::to_string(imfs.count());
    return result;
}

DecompositionResult ma_split(const SentimentSeries& series, int window) {
    series.validate();
    if (window < 1 || series.size() < static_cast<std::size_t>(window)) {
        fail(ErrorCode::TooShort, std::to_string(series.size()) + " observations for window " + std::to_string(window));
    }
    const std::size_t n = series.size();
    const auto w = static_cast<std::size_t>(window);
    std::vector<double> low(n);
    std::vector<double> high(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t start = t + 1 >= w ? t + 1 - w : 0;
        double sum = 0.0;
        for (std::size_t j = start; j <= t; ++j) {
            sum += series.values[j];
        }
        low[t] = sum / static_cast<double>(t - start + 1);
        high[t] = series.values[t] - low[t];
    }
    DecompositionResult result;
    result.method = Method::Ma;
    result.hfs = SentimentSeries{series.label + ":hfs", series.dates, std::move(high)};
    result.lfs = SentimentSeries{series.label + ":lfs", series.dates, std::move(low)};
    result.params["window"] = std::to_string(window);
    return result;
}

std::string write_decomposition_csv(const SentimentSeries& original, const DecompositionResult& result) {
    std::string out = "date,original,hfs,lfs,method,params_hash\n";
    const std::string method(to_string(result.method));
    const std::string hash = result.params_hash();
    for (std::size_t i = 0; i < original.size(); ++i) {
        out += format_date(original.dates[i]) + "," + format_double(original.values[i]) + "," +
               format_double(result.hfs.values[i]) + "," + format_double(result.lfs.values[i]) + "," + method + "," +
               hash + "\n";
    }
    return out;
}

std::string write_imfs_csv(const ImfSet& imfs) {
    std::string out = "date";
    for (std::size_t i = 0; i < imfs.count(); ++i) {
        out += ",imf_" + std::to_string(i + 1);
    }
    out += ",residual\n";
    for (std::size_t t = 0; t < imfs.residual.size(); ++t) {
        out += format_date(imfs.dates[t]);
        for (const auto& imf : imfs.imfs) {
            out += "," + format_double(imf[t]);
        }
        out += "," + format_double(imfs.residual[t]) + "\n";
    }
    return out;
}

} // namespace sentivol::decompose
