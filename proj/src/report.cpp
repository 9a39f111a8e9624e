#include "anicv/report.hpp"

#include <cmath>
#include <fstream>

#include "anicv/pcr_io.hpp"

namespace anicv {

namespace {

Json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

Json to_json(const IterationTrace& trace) {
    Json j;
    j["iterations"] = trace.iterations();
    j["stop_reason"] = to_string(trace.stop);
    j["events"] = trace.events;
    Json recs = Json::array();
    for (const IterationRecord& r : trace.records) {
        Json rec;
        rec["k"] = r.k;
        rec["params"] = r.params;
        rec["level_areas"] = r.level_areas;
        rec["sym_diff_sq"] = finite_or_null(r.sym_diff_sq);
        rec["energy_before_sets"] = finite_or_null(r.energy_before_sets);
        rec["energy_after_sets"] = finite_or_null(r.energy_after_sets);
        rec["energy_after_params"] = finite_or_null(r.energy_after_params);
        recs.push_back(std::move(rec));
    }
    j["records"] = std::move(recs);
    return j;
}

Json to_json(const VerifyReport& report) {
    Json j;
    j["title"] = report.title;
    j["pass"] = report.all_pass();
    Json checks = Json::array();
    for (const CheckResult& c : report.checks) {
        Json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        if (c.informational) jc["informational"] = true;
        jc["expected"] = c.expected;
        jc["actual"] = c.actual;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    j["notes"] = report.notes;
    return j;
}

Json segmentation_report(const std::string& command, const Json& config,
                         const IterationTrace& trace, const Json& result) {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["result"] = result;
    j["trace"] = to_json(trace);
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write JSON file: " + path);
    out << j.dump(2) << '\n';
}

} // namespace anicv
