#include "lipflow/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lipflow {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

bool Report::all_pass() const {
    for (const ReportRow& r : rows)
        if (!r.pass) return false;
    return true;
}

void Report::add_leq(const std::string& id, const std::string& ref, double value,
                     double threshold) {
    rows.push_back({id, ref, value, threshold, value <= threshold});
}

void Report::add_geq(const std::string& id, const std::string& ref, double value,
                     double threshold) {
    rows.push_back({id, ref, value, threshold, value >= threshold});
}

void Report::append(const Report& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::string report_to_csv(const Report& r) {
    std::string out = "check_id,paper_ref,value,threshold,pass\n";
    for (const ReportRow& row : r.rows) {
        out += row.check_id + ',' + row.ref + ',' + fmt(row.value) + ',' + fmt(row.threshold) +
               ',' + (row.pass ? "true" : "false") + '\n';
    }
    return out;
}

void write_report(const Report& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << report_to_csv(r);
}

}  // namespace lipflow
