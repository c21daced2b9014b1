#pragma once

// File formats and result serialization for the CLI: CSV/TSV ingestion of
// microdata, grouped summaries, and scenario definitions, plus JSON/CSV
// emission of result rows with replicate vectors in a sidecar file.
// Numbers are serialized with 12 significant digits.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdi/error.hpp"
#include "hdi/scenario.hpp"
#include "hdi/survey.hpp"
#include "hdi/types.hpp"

namespace hdi::io {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

inline double parse_number(const std::string& raw, std::size_t line) {
    const std::string s = trim(raw);
    if (s.empty()) throw ParseError(line, "empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw ParseError(line, "cannot parse number '" + s + "'");
    return v;
}

// Accepts "0.5" or "50%"; percents are stored as proportions.
inline double parse_rate(const std::string& raw, std::size_t line) {
    const std::string s = trim(raw);
    if (!s.empty() && s.back() == '%')
        return parse_number(s.substr(0, s.size() - 1), line) / 100.0;
    return parse_number(s, line);
}

struct CsvTable {
    char delim = ',';
    std::vector<std::string> header;               // lowercased
    std::vector<std::vector<std::string>> rows;    // raw fields
    std::vector<std::size_t> line_numbers;         // 1-based source lines

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw SchemaError("missing column '" + name + "'");
    }

    std::optional<std::size_t> column_opt(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (t.header.empty()) {
            t.delim = line.find('\t') != std::string::npos ? '\t' : ',';
            for (std::string& h : split(line, t.delim)) t.header.push_back(lower(trim(h)));
            continue;
        }
        auto fields = split(line, t.delim);
        if (fields.size() < t.header.size())
            throw ParseError(lineno, "expected " + std::to_string(t.header.size()) +
                                         " fields, got " + std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
        t.line_numbers.push_back(lineno);
    }
    if (t.header.empty()) throw SchemaError("'" + path + "' is empty");
    return t;
}

// Microdata CSV/TSV: columns stratum, psu, weight, group, outcome.
inline SurveyDataset ingest_microdata(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t c_stratum = t.column("stratum");
    const std::size_t c_psu = t.column("psu");
    const std::size_t c_weight = t.column("weight");
    const std::size_t c_group = t.column("group");
    const std::size_t c_outcome = t.column("outcome");

    std::vector<SurveyRecord> records;
    records.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::size_t line = t.line_numbers[i];
        SurveyRecord r;
        r.stratum = row[c_stratum];
        r.psu = row[c_psu];
        r.group = row[c_group];
        if (r.stratum.empty() || r.psu.empty() || r.group.empty())
            throw ValidationError("line " + std::to_string(line) +
                                  ": stratum, psu, and group must be nonempty");
        r.weight = parse_number(row[c_weight], line);
        r.outcome = parse_number(row[c_outcome], line);
        if (!(r.weight > 0.0))
            throw ValidationError("line " + std::to_string(line) + ": weight must be > 0");
        if (r.outcome < 0.0)
            throw ValidationError("line " + std::to_string(line) + ": outcome must be >= 0");
        records.push_back(std::move(r));
    }
    if (records.empty()) throw SchemaError("'" + path + "' has no data rows");
    return SurveyDataset(std::move(records));
}

// Grouped summary CSV: columns group, size, mean (or rate).
inline GroupedSummary ingest_grouped(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t c_group = t.column("group");
    const std::size_t c_size = t.column("size");
    const auto c_mean = t.column_opt("mean");
    const std::size_t c_value = c_mean ? *c_mean : t.column("rate");

    std::vector<std::string> labels;
    std::vector<double> sizes, means;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::size_t line = t.line_numbers[i];
        const std::string label = row[c_group];
        if (label.empty())
            throw ValidationError("line " + std::to_string(line) + ": empty group label");
        for (const std::string& seen : labels)
            if (seen == label)
                throw ValidationError("line " + std::to_string(line) +
                                      ": duplicate group label '" + label + "'");
        labels.push_back(label);
        sizes.push_back(parse_number(row[c_size], line));
        means.push_back(parse_rate(row[c_value], line));
        if (!(sizes.back() > 0.0))
            throw ValidationError("line " + std::to_string(line) + ": size must be > 0");
        if (means.back() < 0.0)
            throw ValidationError("line " + std::to_string(line) + ": mean must be >= 0");
    }
    if (labels.empty()) throw SchemaError("'" + path + "' has no data rows");
    return GroupedSummary(std::move(labels), std::move(sizes), std::move(means));
}

// Scenario CSV: columns scenario, group, size, rate. Scenarios keep their
// file order; groups keep their per-scenario file order.
inline std::vector<Scenario> ingest_scenarios(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t c_scen = t.column("scenario");
    t.column("group");  // required for readability even though order defines groups
    const std::size_t c_size = t.column("size");
    const std::size_t c_rate = t.column("rate");

    std::vector<Scenario> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const std::size_t line = t.line_numbers[i];
        const std::string name = row[c_scen];
        if (name.empty())
            throw ValidationError("line " + std::to_string(line) + ": empty scenario name");
        Scenario* scen = nullptr;
        for (Scenario& s : out)
            if (s.name == name) scen = &s;
        if (!scen) {
            out.push_back(Scenario{name, {}, {}});
            scen = &out.back();
        }
        scen->sizes.push_back(parse_number(row[c_size], line));
        scen->rates.push_back(parse_rate(row[c_rate], line));
    }
    if (out.empty()) throw SchemaError("'" + path + "' has no data rows");
    for (const Scenario& s : out) validate_scenario(s);
    return out;
}

// ---- result emission ----

enum class OutputFormat { Json, Csv };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    throw ValidationError("unknown output format '" + s + "' (expected json or csv)");
}

// %.12g formatting; results serialize identically run to run.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline double round12(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

struct ResultRow {
    std::string command;  // index | variance | sweep | null-sim
    std::string family;
    std::string scheme;
    double alpha = 0.0;
    std::string reference;  // empty for sweep rows
    std::string scenario;   // sweep rows
    std::string kind;       // null-sim rows: observed | null
    std::string method;     // variance rows
    std::optional<double> estimate;
    std::optional<double> se;
    std::optional<double> abs_change;
    std::optional<double> rel_change;
    std::optional<double> overlap;
    std::string replicates_path;
};

inline const std::vector<std::string>& columns_for(const std::string& command) {
    static const std::vector<std::string> index_cols = {"family", "scheme", "alpha",
                                                        "reference", "estimate"};
    static const std::vector<std::string> variance_cols = {
        "family", "scheme", "alpha", "reference", "estimate", "se", "method",
        "replicates_path"};
    static const std::vector<std::string> sweep_cols = {
        "scenario", "family", "scheme", "alpha", "estimate", "abs_change", "rel_change"};
    static const std::vector<std::string> nullsim_cols = {
        "family", "scheme", "alpha",   "kind",
        "estimate", "se",   "overlap", "replicates_path"};
    if (command == "index") return index_cols;
    if (command == "variance") return variance_cols;
    if (command == "sweep") return sweep_cols;
    return nullsim_cols;
}

inline std::string field_as_string(const ResultRow& r, const std::string& col) {
    auto opt = [](const std::optional<double>& v) {
        return v ? format_number(*v) : std::string();
    };
    if (col == "family") return r.family;
    if (col == "scheme") return r.scheme;
    if (col == "alpha") return format_number(r.alpha);
    if (col == "reference") return r.reference;
    if (col == "scenario") return r.scenario;
    if (col == "kind") return r.kind;
    if (col == "method") return r.method;
    if (col == "estimate") return opt(r.estimate);
    if (col == "se") return opt(r.se);
    if (col == "abs_change") return opt(r.abs_change);
    if (col == "rel_change") return opt(r.rel_change);
    if (col == "overlap") return opt(r.overlap);
    if (col == "replicates_path") return r.replicates_path;
    return {};
}

inline void emit_results(const std::vector<ResultRow>& rows, OutputFormat format,
                         std::ostream& os) {
    if (rows.empty()) {
        os << (format == OutputFormat::Json ? "[]\n" : "");
        return;
    }
    const auto& cols = columns_for(rows.front().command);
    if (format == OutputFormat::Csv) {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
        os << "\n";
        for (const ResultRow& r : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                os << (i ? "," : "") << field_as_string(r, cols[i]);
            os << "\n";
        }
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResultRow& r : rows) {
        nlohmann::ordered_json obj;
        auto put_opt = [&](const char* key, const std::optional<double>& v) {
            if (v) obj[key] = round12(*v);
        };
        for (const std::string& col : cols) {
            if (col == "alpha") {
                obj["alpha"] = round12(r.alpha);
            } else if (col == "estimate" || col == "se" || col == "abs_change" ||
                       col == "rel_change" || col == "overlap") {
                put_opt(col.c_str(),
                        col == "estimate"     ? r.estimate
                        : col == "se"         ? r.se
                        : col == "abs_change" ? r.abs_change
                        : col == "rel_change" ? r.rel_change
                                              : r.overlap);
            } else {
                const std::string v = field_as_string(r, col);
                if (!v.empty()) obj[col] = v;
            }
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << "\n";
}

// One sidecar file per run holds every replicate vector: columns
// series, replicate, value.
struct ReplicateSeries {
    std::string series;  // e.g. "ssri:pw:a=1:bootstrap" or ":null"
    std::vector<double> values;
};

inline std::string replicates_sidecar_path(const std::string& out_path) {
    const std::size_t dot = out_path.find_last_of('.');
    const std::size_t slash = out_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + ".replicates.csv";
    return out_path.substr(0, dot) + ".replicates.csv";
}

inline void write_replicates(const std::vector<ReplicateSeries>& series,
                             const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << "series,replicate,value\n";
    for (const ReplicateSeries& s : series)
        for (std::size_t i = 0; i < s.values.size(); ++i)
            os << s.series << "," << i + 1 << "," << format_number(s.values[i]) << "\n";
    if (!os) throw IoError("failed writing '" + path + "'");
}

}  // namespace hdi::io
