#include "sentivol/sentiment.hpp"

#include "sentivol/csv.hpp"
#include "sentivol/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sentivol::sentiment {

double adl(long long n_up, long long n_down) {
    return static_cast<double>(n_up - n_down);
}

double turnover(double volume, double float_cap) {
    if (!(float_cap > 0.0)) {
        fail(ErrorCode::NonPositiveFloatCap, "float_cap = " + format_double(float_cap));
    }
    return volume / float_cap;
}

double cef_discount(double nav, double price) {
    if (!(nav > 0.0)) {
        fail(ErrorCode::NonPositiveNav, "nav = " + format_double(nav));
    }
    return (nav - price) / nav;
}

io::AlignedPanel proxy_columns(const io::ProxyPanel& panel) {
    io::AlignedPanel out;
    out.dates = panel.dates;
    out.names = {"adl", "turnover", "cef_discount"};
    out.columns.assign(3, {});
    for (std::size_t i = 0; i < panel.size(); ++i) {
        out.columns[0].push_back(adl(panel.n_up[i], panel.n_down[i]));
        out.columns[1].push_back(turnover(panel.volume[i], panel.float_cap[i]));
        out.columns[2].push_back(cef_discount(panel.cef_nav[i], panel.cef_price[i]));
    }
    return out;
}

CompositeResult composite_index(const io::AlignedPanel& panel, std::string_view sign_reference) {
    const std::size_t k = panel.columns.size();
    const std::size_t t = panel.dates.size();
    if (k == 0) {
        fail(ErrorCode::TooFewDates, "no proxy columns");
    }
    if (t < 30) {
        fail(ErrorCode::TooFewDates, std::to_string(t) + " dates, need >= 30");
    }

    Eigen::MatrixXd z(t, k);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& col = panel.columns[c];
        if (col.size() != t) {
            fail(ErrorCode::InvariantViolation, "column '" + panel.names[c] + "' length mismatch");
        }
        const double m = stats::mean(col);
        const double sd = stats::stdev(col);
        if (!(sd > 0.0)) {
            fail(ErrorCode::ConstantColumn, panel.names[c]);
        }
        for (std::size_t i = 0; i < t; ++i) {
            z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = (col[i] - m) / sd;
        }
    }

    const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(t - 1);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
    const Eigen::VectorXd& eigenvalues = solver.eigenvalues(); // ascending
    const double top = eigenvalues(eigenvalues.size() - 1);
    Eigen::Index chosen = eigenvalues.size() - 1;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) >= top - 1e-12) {
            chosen = i;
            break;
        }
    }
    Eigen::VectorXd loading = solver.eigenvectors().col(chosen);
    loading.normalize();
    Eigen::VectorXd scores = z * loading;

    const auto ref_it = std::find(panel.names.begin(), panel.names.end(), sign_reference);
    const auto ref = static_cast<Eigen::Index>(ref_it == panel.names.end() ? 0 : ref_it - panel.names.begin());
    if (scores.dot(z.col(ref)) < 0.0) {
        loading = -loading;
        scores = -scores;
    }

    std::vector<double> values(scores.data(), scores.data() + scores.size());
    const double m = stats::mean(values);
    const double sd = stats::stdev(values);
    for (double& v : values) {
        v = (v - m) / sd;
    }

    CompositeResult result;
    result.index = SentimentSeries{"pca", panel.dates, std::move(values)};
    result.loadings.names = panel.names;
    result.loadings.loadings.assign(loading.data(), loading.data() + loading.size());
    result.loadings.explained_variance = std::min(1.0, eigenvalues(chosen) / corr.trace());
    return result;
}

double dictionary_score(long long n_pos, long long n_neg, long long n_total) {
    if (n_total < 1) {
        fail(ErrorCode::EmptyDocument, "n_total = " + std::to_string(n_total));
    }
    if (n_pos < 0 || n_neg < 0) {
        fail(ErrorCode::InvariantViolation, "negative word count");
    }
    if (n_pos + n_neg > n_total) {
        fail(ErrorCode::CountOverflow, std::to_string(n_pos) + " + " + std::to_string(n_neg) + " > " +
                                           std::to_string(n_total));
    }
    return static_cast<double>(n_pos - n_neg) / static_cast<double>(n_total);
}

SentimentSeries parse_external_scores(std::string_view text, const std::string& default_label,
                                      ExternalLoadReport* report) {
    CsvTable table;
    try {
        table = parse_csv(text, default_label);
    } catch (const Error& e) {
        fail(ErrorCode::SchemaMismatch, e.what());
    }
    const int c_date = table.find_column("date");
    const int c_score = table.find_column("score");
    const int c_n = table.find_column("n_texts");
    if (c_date < 0 || c_score < 0 || c_n < 0) {
        fail(ErrorCode::SchemaMismatch, "expected columns date, score, n_texts");
    }

    struct Row {
        Date date;
        double score;
        long long n;
    };
    std::vector<Row> rows;
    std::set<Date> seen;
    int empty_days = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = "line " + std::to_string(table.line_numbers[r]);
        const auto d = parse_date(row[static_cast<std::size_t>(c_date)]);
        long long n = 0;
        if (!d || !parse_long(row[static_cast<std::size_t>(c_n)], n) || n < 0) {
            fail(ErrorCode::SchemaMismatch, where + ": bad date or n_texts");
        }
        if (!seen.insert(*d).second) {
            fail(ErrorCode::DuplicateDate, where + ": " + format_date(*d));
        }
        const std::string& score_text = row[static_cast<std::size_t>(c_score)];
        if (score_text.empty() && n == 0) {
            ++empty_days;
            continue;
        }
        double score = 0.0;
        if (!parse_double(score_text, score) || !std::isfinite(score)) {
            fail(ErrorCode::SchemaMismatch, where + ": bad score '" + score_text + "'");
        }
        rows.push_back(Row{*d, score, n});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });

    SentimentSeries series;
    const auto label = table.metadata.find("label");
    series.label = label != table.metadata.end() ? label->second : default_label;
    std::vector<long long> n_texts;
    for (const auto& row : rows) {
        series.dates.push_back(row.date);
        series.values.push_back(row.score);
        n_texts.push_back(row.n);
    }
    if (report != nullptr) {
        report->n_texts = std::move(n_texts);
        report->empty_days = empty_days;
    }
    return series;
}

SentimentSeries load_external_scores(const std::filesystem::path& path, ExternalLoadReport* report) {
    return parse_external_scores(read_text_file(path), "external:" + path.stem().string(), report);
}

std::string write_sentiment_csv(const SentimentSeries& series, const std::vector<long long>& n_texts) {
    std::string out = "# label: " + series.label + "\n";
    out += "date,score,n_texts\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const long long n = n_texts.empty() ? 1 : n_texts[i];
        out += format_date(series.dates[i]) + "," + format_double(series.values[i]) + "," + std::to_string(n) + "\n";
    }
    return out;
}

std::string write_loadings_csv(const PcaLoadings& loadings) {
    std::string out = "proxy,loading,explained_variance\n";
    for (std::size_t i = 0; i < loadings.names.size(); ++i) {
        out += loadings.names[i] + "," + format_double(loadings.loadings[i]) + "," +
               format_double(loadings.explained_variance) + "\n";
    }
    return out;
}

} // namespace sentivol::sentiment
