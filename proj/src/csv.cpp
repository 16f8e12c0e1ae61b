#include "pedsim/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "pedsim/errors.hpp"

namespace pedsim {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void parse_fail(std::string_view field, std::string_view context,
                             int line) {
    throw InputError("cannot parse '" + std::string(field) + "' as " +
                     std::string(context) + " on line " + std::to_string(line));
}

}  // namespace

double parse_double(std::string_view field, std::string_view context, int line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    // std::from_chars does not accept a leading '+' or "+nan"/"+inf"
    if (field.size() > 1 && field.front() == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        parse_fail(field, context, line);
    return v;
}

long long parse_int(std::string_view field, std::string_view context, int line) {
    long long v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        parse_fail(field, context, line);
    return v;
}

std::uint64_t parse_uint64(std::string_view field, std::string_view context,
                           int line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        parse_fail(field, context, line);
    return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_results_csv(std::ostream& os, std::span<const FlowRecord> records) {
    os << kResultsHeader << '\n';
    for (const FlowRecord& r : records) {
        os << r.parameter_set << ',' << format_double(r.width_m) << ','
           << r.replication << ',' << r.seed << ',' << r.n_pedestrians << ','
           << (r.completed ? '1' : '0') << ',' << format_double(r.total_time_s)
           << ',' << format_double(r.flux_per_s) << ','
           << format_double(r.specific_flux_per_m_s) << '\n';
    }
}

std::vector<FlowRecord> read_results_csv(std::istream& is) {
    std::string line;
    int line_no = 0;

    if (!std::getline(is, line))
        throw InputError("results CSV is empty (missing header)");
    ++line_no;
    if (line != kResultsHeader)
        throw InputError("results CSV header mismatch on line 1: got '" + line +
                         "'");

    std::vector<FlowRecord> records;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9)
            throw InputError("expected 9 fields on line " +
                             std::to_string(line_no) + ", got " +
                             std::to_string(f.size()));
        FlowRecord r;
        r.parameter_set = std::string(f[0]);
        r.width_m = parse_double(f[1], "width_m", line_no);
        r.replication = static_cast<int>(parse_int(f[2], "replication", line_no));
        r.seed = parse_uint64(f[3], "seed", line_no);
        r.n_pedestrians =
            static_cast<int>(parse_int(f[4], "n_pedestrians", line_no));
        const long long completed = parse_int(f[5], "completed", line_no);
        if (completed != 0 && completed != 1)
            throw InputError("completed flag must be 0 or 1 on line " +
                             std::to_string(line_no));
        r.completed = completed == 1;
        r.total_time_s = parse_double(f[6], "total_time_s", line_no);
        r.flux_per_s = parse_double(f[7], "flux_per_s", line_no);
        r.specific_flux_per_m_s =
            parse_double(f[8], "specific_flux_per_m_s", line_no);
        records.push_back(std::move(r));
    }
    return records;
}

void write_summary_csv(std::ostream& os, std::span<const AggregateRow> rows) {
    os << kSummaryHeader << '\n';
    for (const AggregateRow& r : rows) {
        os << r.parameter_set << ',' << format_double(r.width_m) << ','
           << r.n_reps << ',' << format_double(r.mean_total_time_s) << ','
           << format_double(r.std_total_time_s) << ','
           << format_double(r.mean_flux_per_s) << ','
           << format_double(r.std_flux_per_s) << ','
           << format_double(r.mean_specific_flux_per_m_s) << ','
           << format_double(r.std_specific_flux_per_m_s) << '\n';
    }
}

}  // namespace pedsim
