#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace syrup {

/// One table cell of the evaluation report. mean/std are percentages; an
/// unset mean marks a degenerate (n/a) cell.
struct ReportRow {
    std::string model;
    std::string dataset;
    std::string condition;
    std::string metric;  // acc_bias | bs_bias | bss
    std::string method;  // platt | syrup | - (calibrator-free metrics)
    std::optional<double> mean;
    std::optional<double> std_dev;
    int n_splits = 0;
};

void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);
void write_report_markdown(const std::filesystem::path& path,
                           const std::vector<ReportRow>& rows);

/// Fixed two-decimal percent formatting, "n/a" when unset.
std::string format_cell(const std::optional<double>& value);

}  // namespace syrup
