#pragma once

#include "sentivol/data_io.hpp"
#include "sentivol/series.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sentivol::sentiment {

/// Advance-decline line: n_up - n_down.
double adl(long long n_up, long long n_down);
/// Trading volume over circulating market capitalization.
double turnover(double volume, double float_cap);
/// Closed-end fund discount (nav - price) / nav; positive at a discount.
double cef_discount(double nav, double price);

/// Daily proxy columns `adl`, `turnover`, `cef_discount` derived from raw counts and prices.
io::AlignedPanel proxy_columns(const io::ProxyPanel& panel);

struct PcaLoadings {
    std::vector<std::string> names;
    std::vector<double> loadings; // unit norm
    double explained_variance = 0.0;
};

struct CompositeResult {
    SentimentSeries index;
    PcaLoadings loadings;
};

/// First principal component of the standardized proxies (correlation-matrix
/// PCA), sign-fixed to correlate nonnegatively with `sign_reference` (first
/// column when that name is absent), then standardized to mean 0 and unit
/// sample variance.
CompositeResult composite_index(const io::AlignedPanel& panel, std::string_view sign_reference = "adl");

/// (n_pos - n_neg) / n_total.
double dictionary_score(long long n_pos, long long n_neg, long long n_total);

struct ExternalLoadReport {
    std::vector<long long> n_texts; // parallel to the returned series
    int empty_days = 0;             // rows with n_texts = 0 and no score
};

/// Reads the sentiment.csv contract (date, score, n_texts). The series label
/// comes from a `# label:` metadata line, else `external:<file stem>`.
SentimentSeries load_external_scores(const std::filesystem::path& path, ExternalLoadReport* report = nullptr);
SentimentSeries parse_external_scores(std::string_view text, const std::string& default_label,
                                      ExternalLoadReport* report = nullptr);

/// Writes the sentiment.csv contract; n_texts defaults to 1 per day when not given.
std::string write_sentiment_csv(const SentimentSeries& series, const std::vector<long long>& n_texts = {});
std::string write_loadings_csv(const PcaLoadings& loadings);

} // namespace sentivol::sentiment
