#pragma once

#include <filesystem>
#include <string>

#include "mrubis/sim/simulator.hpp"

namespace mrubis::sim {

// File names produced by writeReport().
inline constexpr const char* kUtilityCsv = "utility.csv";
inline constexpr const char* kExecTimeCsv = "exectime.csv";
inline constexpr const char* kEventsLog = "events.log";
inline constexpr const char* kSummaryTxt = "summary.txt";
inline constexpr const char* kSimulationLog = "simulation.log";
inline constexpr const char* kUtilitySvg = "utility.svg";
inline constexpr const char* kExecTimeSvg = "exectime.svg";

std::string snapshotFileName(int round);

/// round,phase,utility with one afterInjection and one afterAdaptation row per round.
std::string utilityCsv(const SimulationReport& report);
/// round,execution_time_ms
std::string execTimeCsv(const SimulationReport& report);
/// One line per event: round,step,timestamp,kind,subjectUid,payload
std::string eventsLog(const SimulationReport& report);
std::string summaryText(const SimulationReport& report);
/// Per-round injections, strategies, violations and failures.
std::string simulationLog(const SimulationReport& report);

/// Step chart of the utility: two data points per round (after injection,
/// after adaptation), starting from the initial utility.
std::string utilityChartSvg(const SimulationReport& report);
/// Line chart of the engine execution time per round.
std::string execTimeChartSvg(const SimulationReport& report);

/// Writes all report files and the configured snapshots; throws
/// std::runtime_error on I/O failure.
void writeReport(const SimulationReport& report, const std::filesystem::path& outputDir);

}  // namespace mrubis::sim
