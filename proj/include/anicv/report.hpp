#ifndef ANICV_REPORT_HPP
#define ANICV_REPORT_HPP

#include <json.hpp>

#include "anicv/algorithms.hpp"
#include "anicv/oracle.hpp"

namespace anicv {

using Json = nlohmann::ordered_json;

Json to_json(const IterationTrace& trace);
Json to_json(const VerifyReport& report);

/// Segmentation result record: per-iteration constants, areas, guard values
/// and energies, plus the stop reason and any events.
Json segmentation_report(const std::string& command, const Json& config,
                         const IterationTrace& trace, const Json& result);

void write_json_file(const std::string& path, const Json& j);

} // namespace anicv

#endif
