#pragma once

#include "app/config.hpp"
#include "app/report.hpp"

#include "iondfs/errors.hpp"

namespace iondfs::app {

/// 0 ok, 2 config, 3 numerical or IO failure, 4 guard violation.
int exit_code_for(ErrorCode code);

/// The spectrum the pulse sees: every mode, or the lowest sideband_modes.
ModeSpectrum selected_modes(const RunConfig& config);

/// Schedule of `periods` total slowest-mode periods split into `cycles`.
ForceSchedule build_schedule(const RunConfig& config, const ModeSpectrum& modes, std::size_t periods,
                             std::size_t cycles);

Report run_command(const RunConfig& config);

}  // namespace iondfs::app
