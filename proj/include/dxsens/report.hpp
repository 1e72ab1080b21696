#pragma once
// Text renderings of experiment reports. Percentages carry one decimal,
// confidences four.

#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dxsens/harness.hpp"

namespace dxsens {

inline constexpr const char* kAbsentMark = "\xE2\x80\x94";  // U+2014

namespace detail {

inline std::string fixed(double x, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << x;
    return os.str();
}

inline std::string percent_cell(const std::optional<double>& pct) {
    return pct ? fixed(*pct, 1) + "%" : std::string(kAbsentMark);
}

inline std::string confidence_cell(const std::optional<double>& mean, std::size_t n) {
    return (mean ? fixed(*mean, 4) : std::string(kAbsentMark)) + " (" + std::to_string(n) + ")";
}

// Display width in code points (cells are ASCII plus the em dash).
inline std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char ch : s)
        if ((ch & 0xC0) != 0x80) ++w;
    return w;
}

}  // namespace detail

inline void write_table(std::ostream& os, const Report& report) {
    const std::vector<std::string> header{"Scheme", "Percentage Correct", "Avg Confidence Correct (n)",
                                          "Avg Confidence Incorrect (n)", "Percentage Better"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : report.rows)
        cells.push_back({row.scheme, detail::percent_cell(row.pct_correct),
                         detail::confidence_cell(row.avg_conf_correct, row.n_correct),
                         detail::confidence_cell(row.avg_conf_incorrect, row.n_incorrect),
                         detail::percent_cell(row.pct_better)});

    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : cells) width[c] = std::max(width[c], detail::display_width(r[c]));
    }
    auto emit = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c > 0) os << " | ";
            os << r[c];
            if (c + 1 < r.size()) os << std::string(width[c] - detail::display_width(r[c]), ' ');
        }
        os << '\n';
    };

    os << "Prior regime: " << to_string(report.prior_regime) << '\n';
    emit(header);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c > 0) os << "-+-";
        os << std::string(width[c], '-');
    }
    os << '\n';
    for (const auto& r : cells) emit(r);
}

inline void write_tables(std::ostream& os, const std::vector<Report>& reports) {
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i > 0) os << '\n';
        write_table(os, reports[i]);
    }
}

inline constexpr const char* kCsvHeader =
    "scheme,prior_regime,pct_correct,avg_conf_correct,n_correct,avg_conf_incorrect,n_incorrect,pct_better,"
    "n_inconsistent";

inline void write_csv(std::ostream& os, const std::vector<Report>& reports) {
    auto opt = [](const std::optional<double>& x, int decimals) {
        return x ? detail::fixed(*x, decimals) : std::string();
    };
    os << kCsvHeader << '\n';
    for (const auto& report : reports)
        for (const auto& row : report.rows)
            os << row.scheme << ',' << to_string(row.prior_regime) << ',' << detail::fixed(row.pct_correct, 1) << ','
               << opt(row.avg_conf_correct, 4) << ',' << row.n_correct << ',' << opt(row.avg_conf_incorrect, 4) << ','
               << row.n_incorrect << ',' << opt(row.pct_better, 1) << ',' << row.n_inconsistent << '\n';
}

}  // namespace dxsens
