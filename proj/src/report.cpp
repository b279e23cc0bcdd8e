#include "syrup/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "syrup/error.hpp"

namespace syrup {

std::string format_cell(const std::optional<double>& value) {
    if (!value) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *value);
    return buf;
}

void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "model,dataset,condition,metric,method,mean,std,n_splits\n";
    for (const auto& r : rows) {
        out << r.model << ',' << r.dataset << ',' << r.condition << ',' << r.metric << ','
            << r.method << ',' << format_cell(r.mean) << ',' << format_cell(r.std_dev) << ','
            << r.n_splits << '\n';
    }
}

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<ReportRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8)
            throw ConfigError(path.string() + ": malformed row: " + line);
        ReportRow r;
        r.model = fields[0];
        r.dataset = fields[1];
        r.condition = fields[2];
        r.metric = fields[3];
        r.method = fields[4];
        if (fields[5] != "n/a") r.mean = std::stod(fields[5]);
        if (fields[6] != "n/a") r.std_dev = std::stod(fields[6]);
        r.n_splits = std::stoi(fields[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_report_markdown(const std::filesystem::path& path,
                           const std::vector<ReportRow>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "| model | dataset | condition | metric | method | mean | std | splits |\n";
    out << "|---|---|---|---|---|---:|---:|---:|\n";
    for (const auto& r : rows) {
        out << "| " << r.model << " | " << r.dataset << " | " << r.condition << " | "
            << r.metric << " | " << r.method << " | " << format_cell(r.mean) << " | "
            << format_cell(r.std_dev) << " | " << r.n_splits << " |\n";
    }
}

}  // namespace syrup
