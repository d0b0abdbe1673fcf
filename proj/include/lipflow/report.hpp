#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lipflow {

struct ReportRow {
    std::string check_id;
    std::string ref;  // property label, stable across runs
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct Report {
    std::vector<ReportRow> rows;

    bool all_pass() const;
    /// Row helpers; `leq` passes when value <= threshold, `geq` when >=.
    void add_leq(const std::string& id, const std::string& ref, double value, double threshold);
    void add_geq(const std::string& id, const std::string& ref, double value, double threshold);
    void append(const Report& other);
};

/// CSV schema: check_id,paper_ref,value,threshold,pass (doubles as %.17g).
std::string report_to_csv(const Report& r);
void write_report(const Report& r, const std::string& path);

}  // namespace lipflow
