#pragma once

#include "sentivol/series.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sentivol::decompose {

enum class Method { Fft, Emd, Ma };

std::string_view to_string(Method method);

/// High/low frequency split of one series. hfs + lfs reconstructs the input.
struct DecompositionResult {
    SentimentSeries hfs;
    SentimentSeries lfs;
    Method method = Method::Fft;
    std::map<std::string, std::string> params;
    /// Optional very-low-frequency band (a subset of lfs); not used downstream.
    std::optional<SentimentSeries> extreme_low;

    /// Stable fingerprint of method and params.
    std::string params_hash() const;
};

struct FftConfig {
    /// Components with period (in observations) strictly below this are high frequency.
    double cutoff_period = 15.0;
    /// Split at the amplitude minimum among periods in [auto_min_period, auto_max_period].
    bool auto_cutoff = false;
    double auto_min_period = 10.0;
    double auto_max_period = 30.0;
    /// When set, also report the band with period >= this value.
    std::optional<double> extreme_low_period;
};

/// Fourier truncation of the mean-removed series. Throws SeriesTooShort when
/// the series is shorter than four cutoff periods.
DecompositionResult fft_split(const SentimentSeries& series, const FftConfig& config = {});

struct Spectrum {
    std::vector<int> bin;
    std::vector<double> period;
    std::vector<double> amplitude;
};

/// One-sided DFT amplitudes of the mean-removed series, bins 1..n/2.
Spectrum amplitude_spectrum(std::span<const double> values);

struct ImfSet {
    std::vector<Date> dates;
    std::vector<std::vector<double>> imfs;
    std::vector<double> residual;
    std::vector<int> sift_iterations;

    std::size_t count() const { return imfs.size(); }
};

struct EmdConfig {
    int max_imf = 10;
    double sift_tolerance = 0.2;
    int max_sift_iterations = 50;
};

/// Empirical mode decomposition by envelope-mean sifting. Envelopes are
/// natural cubic splines through the local extrema, mirrored two extrema deep
/// at both ends. Sifting stops when the normalized squared change between
/// iterates drops below `sift_tolerance` and the extrema / zero-crossing counts
/// differ by at most one, or after `max_sift_iterations`. Extraction stops when
/// the residual has fewer than three extrema or `max_imf` is reached.
ImfSet emd(const SentimentSeries& series, const EmdConfig& config = {});

int count_extrema(std::span<const double> x);
int count_zero_crossings(std::span<const double> x);

/// Number of leading IMFs forming the high-frequency part: one less than the
/// first IMF whose mean is significantly nonzero (two-sided t-test at `alpha`),
/// at least 1; all IMFs when none is significant.
int auto_imf_split(const ImfSet& imfs, double alpha = 0.05);

/// hfs = IMF 1..k, lfs = remaining IMFs + residual. `k` empty means auto.
DecompositionResult emd_split(const ImfSet& imfs, std::optional<int> k = 4);

/// lfs = trailing `window`-observation mean (expanding at the start); hfs = series - lfs.
DecompositionResult ma_split(const SentimentSeries& series, int window = 22);

/// date, original, hfs, lfs, method, params_hash.
std::string write_decomposition_csv(const SentimentSeries& original, const DecompositionResult& result);
/// date, imf_1.., residual.
std::string write_imfs_csv(const ImfSet& imfs);

} // namespace sentivol::decompose
