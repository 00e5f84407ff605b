#include "mrubis/sim/report.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace mrubis::sim {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
};

Axis paddedRange(const std::vector<double>& values) {
    if (values.empty()) return {};
    auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn;
    double hi = *mx;
    double pad = (hi - lo) * 0.05;
    if (pad == 0.0) pad = std::max(1.0, std::abs(hi) * 0.05);
    return {lo - pad, hi + pad};
}

class Plot {
public:
    Plot(double xMax, Axis y) : xMax_(std::max(xMax, 1.0)), y_(y) {}

    [[nodiscard]] double x(double v) const { return kLeft + v / xMax_ * (kWidth - kLeft - kRight); }
    [[nodiscard]] double y(double v) const {
        return kTop + (y_.hi - v) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
    }

    [[nodiscard]] std::string frame(std::string_view title, std::string_view xLabel, std::string_view yLabel) const {
        std::string out = fmt::format(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            "<text x=\"{2:.1f}\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{3}</text>\n",
            kWidth, kHeight, kWidth / 2, title);
        const double x0 = kLeft;
        const double x1 = kWidth - kRight;
        const double y0 = kHeight - kBottom;
        out += fmt::format("<line class=\"axis\" x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
                           x0, y0, x1);
        out += fmt::format("<line class=\"axis\" x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n",
                           x0, y0, kTop);
        for (int i = 0; i <= 4; ++i) {
            const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            out += fmt::format(
                "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
                x0 - 6, y(v) + 4, v);
            const double r = xMax_ * i / 4.0;
            out += fmt::format(
                "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{:.4g}</text>\n",
                x(r), y0 + 16, r);
        }
        out += fmt::format(
            "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            (x0 + x1) / 2, kHeight - 12, xLabel);
        out += fmt::format(
            "<text x=\"16\" y=\"{0:.1f}\" transform=\"rotate(-90 16 {0:.1f})\" text-anchor=\"middle\" "
            "font-family=\"sans-serif\" font-size=\"12\">{1}</text>\n",
            (kTop + y0) / 2, yLabel);
        return out;
    }

private:
    double xMax_;
    Axis y_;
};

void writeFile(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
    out << content;
    if (!out) throw std::runtime_error(fmt::format("failed writing {}", path.string()));
}

}  // namespace

std::string snapshotFileName(int round) { return fmt::format("snapshot-round-{:04}.json", round); }

std::string utilityCsv(const SimulationReport& report) {
    std::string out = "round,phase,utility\n";
    for (const auto& r : report.rounds) {
        out += fmt::format("{},afterInjection,{}\n", r.round, r.utilityAfterInjection);
        out += fmt::format("{},afterAdaptation,{}\n", r.round, r.utilityAfterAdaptation);
    }
    return out;
}

std::string execTimeCsv(const SimulationReport& report) {
    std::string out = "round,execution_time_ms\n";
    for (const auto& r : report.rounds) out += fmt::format("{},{:.6f}\n", r.round, r.executionTimeMs);
    return out;
}

std::string eventsLog(const SimulationReport& report) {
    std::string out;
    for (const auto& e : report.events) {
        out += comparch::formatEventLine(e);
        out += '\n';
    }
    return out;
}

std::string summaryText(const SimulationReport& report) {
    const auto& s = report.summary;
    return fmt::format(
        "engine: {}\nscenario: {}\nseed: {}\nrounds: {}\ninitial_utility: {}\nfinal_utility: {}\n"
        "mean_execution_time_ms: {:.6f}\nmax_execution_time_ms: {:.6f}\nrounds_fully_healed: {}\n"
        "failed_rounds: {}\ntotal_model_reads: {}\nevents: {}\n",
        report.engine, report.scenario, report.seed, report.rounds.size(), s.initialUtility, s.finalUtility,
        s.meanExecutionTimeMs, s.maxExecutionTimeMs, s.roundsFullyHealed, s.failedRounds, s.totalModelReads,
        report.events.size());
}

std::string simulationLog(const SimulationReport& report) {
    std::string out;
    for (const auto& r : report.rounds) {
        std::string injected;
        for (const auto& i : r.injections) {
            if (!injected.empty()) injected += ' ';
            injected += fmt::format("{}@{}", toString(i.kind), i.target.value);
        }
        std::string strategies;
        for (const auto& s : r.strategies) {
            if (!strategies.empty()) strategies += ' ';
            strategies += fmt::format("{}@{}", s.strategy, s.target.value);
        }
        out += fmt::format(
            "round {}: injected [{}] utility {} -> {} -> {} engine {:.6f} ms events {} reads {} strategies [{}] "
            "violations {}{}\n",
            r.round, injected, r.utilityBeforeInjection, r.utilityAfterInjection, r.utilityAfterAdaptation,
            r.executionTimeMs, r.eventsDelivered, r.modelReads, strategies, r.violations.size(),
            r.failed ? " FAILED: " + r.failure : std::string{});
        for (const auto& v : r.violations) {
            out += fmt::format("  [{}] {} @{}: {}\n", v.validator, v.code, v.subject.value, v.message);
        }
        for (const auto& n : r.notes) out += fmt::format("  note: {}\n", n);
    }
    return out;
}

std::string utilityChartSvg(const SimulationReport& report) {
    std::vector<double> values{report.summary.initialUtility};
    for (const auto& r : report.rounds) {
        values.push_back(r.utilityAfterInjection);
        values.push_back(r.utilityAfterAdaptation);
    }
    Plot plot(static_cast<double>(report.rounds.size()), paddedRange(values));
    std::string out = plot.frame("Utility", "round", "utility");

    std::string path = fmt::format("M {:.2f} {:.2f}", plot.x(0), plot.y(report.summary.initialUtility));
    std::string points;
    double previous = report.summary.initialUtility;
    for (const auto& r : report.rounds) {
        const double xi = plot.x(r.round - 0.5);
        const double xa = plot.x(r.round);
        path += fmt::format(" L {:.2f} {:.2f} L {:.2f} {:.2f} L {:.2f} {:.2f} L {:.2f} {:.2f}", xi, plot.y(previous), xi,
                            plot.y(r.utilityAfterInjection), xa, plot.y(r.utilityAfterInjection), xa,
                            plot.y(r.utilityAfterAdaptation));
        points += fmt::format(
            "<circle class=\"point\" data-round=\"{}\" data-phase=\"afterInjection\" data-utility=\"{}\" "
            "cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"#d62728\"/>\n",
            r.round, r.utilityAfterInjection, xi, plot.y(r.utilityAfterInjection));
        points += fmt::format(
            "<circle class=\"point\" data-round=\"{}\" data-phase=\"afterAdaptation\" data-utility=\"{}\" "
            "cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"#1f77b4\"/>\n",
            r.round, r.utilityAfterAdaptation, xa, plot.y(r.utilityAfterAdaptation));
        previous = r.utilityAfterAdaptation;
    }
    out += fmt::format("<path class=\"series\" d=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n", path);
    out += points;
    out += "</svg>\n";
    return out;
}

std::string execTimeChartSvg(const SimulationReport& report) {
    std::vector<double> values;
    for (const auto& r : report.rounds) values.push_back(r.executionTimeMs);
    Axis axis = paddedRange(values);
    axis.lo = std::min(axis.lo, 0.0);
    Plot plot(static_cast<double>(report.rounds.size()), axis);
    std::string out = plot.frame("Execution time of the adaptation engine", "round", "time [ms]");
    std::string line;
    std::string points;
    for (const auto& r : report.rounds) {
        if (!line.empty()) line += ' ';
        line += fmt::format("{:.2f},{:.2f}", plot.x(r.round), plot.y(r.executionTimeMs));
        points += fmt::format(
            "<circle class=\"point\" data-round=\"{}\" data-time-ms=\"{:.6f}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" "
            "fill=\"#2ca02c\"/>\n",
            r.round, r.executionTimeMs, plot.x(r.round), plot.y(r.executionTimeMs));
    }
    out += fmt::format("<polyline class=\"series\" points=\"{}\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\"/>\n",
                       line);
    out += points;
    out += "</svg>\n";
    return out;
}

void writeReport(const SimulationReport& report, const std::filesystem::path& outputDir) {
    std::error_code ec;
    std::filesystem::create_directories(outputDir, ec);
    if (ec) throw std::runtime_error(fmt::format("cannot create {}: {}", outputDir.string(), ec.message()));
    writeFile(outputDir / kUtilityCsv, utilityCsv(report));
    writeFile(outputDir / kExecTimeCsv, execTimeCsv(report));
    writeFile(outputDir / kEventsLog, eventsLog(report));
    writeFile(outputDir / kSummaryTxt, summaryText(report));
    writeFile(outputDir / kSimulationLog, simulationLog(report));
    writeFile(outputDir / kUtilitySvg, utilityChartSvg(report));
    writeFile(outputDir / kExecTimeSvg, execTimeChartSvg(report));
    for (const auto& [round, text] : report.snapshots) writeFile(outputDir / snapshotFileName(round), text);
}

}  // namespace mrubis::sim
