#ifndef BESS_TRACE_IO_HPP
#define BESS_TRACE_IO_HPP

#include <string>

#include "bess/model.hpp"
#include "bess/types.hpp"

// Flat-file formats:
//   trace CSV:  header "t,r"; t is the integer step, r a decimal in [-1, 1].
//   run CSV:    header "t,r,c,d,x,cum_penalty,cum_degradation".
// Values outside [-1, 1] or malformed rows fail with the offending row
// number; a header-only file is an empty-trace error.

namespace bess {

RegulationTrace load_trace(const std::string& path);

void save_trace(const RegulationTrace& trace, const std::string& path);

/// Per-step dump of one run, including cumulative cost columns.
void save_run_csv(const RunResult& result, const RegulationTrace& trace,
                  const MarketParams& market, const BatteryParams& battery, double tau_hours,
                  const std::string& path);

}  // namespace bess

#endif
