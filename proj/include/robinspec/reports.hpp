#pragma once

#include <string>
#include <utility>
#include <vector>

#include "robinspec/config.hpp"
#include "robinspec/hypotheses.hpp"
#include "robinspec/multipliers.hpp"
#include "robinspec/resolvent.hpp"
#include "robinspec/spectral.hpp"

namespace robinspec {

/// RFC-4180 field escaping: wrap in quotes when the field contains a comma,
/// quote, or line break, doubling embedded quotes.
std::string csv_escape(const std::string& field);

/// One rectangular table of string cells. `name` is the file stem (CSV/SVG)
/// and the payload key (JSON).
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

/// Optional graphic: one colored cell per (x, y) sample of `values[y][x]`,
/// log-scaled when the data spans more than two decades. NaN cells render as
/// hatched gray (skipped shifts).
struct HeatmapSpec {
  std::string name;
  std::string title;
  std::string x_label, y_label;
  std::vector<double> xs, ys;
  std::vector<std::vector<double>> values;  // [ys.size()][xs.size()]
};

/// Everything one command emits: tables, optional heatmaps, and the
/// provenance header (timestamp + resolved config) every artifact embeds.
struct ReportBundle {
  int schema_version = 1;
  std::string command;
  std::string timestamp;  // RFC 3339 UTC, captured once per run
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ReportTable> tables;
  std::vector<HeatmapSpec> heatmaps;
};

/// Current UTC time as RFC 3339 ("2026-08-19T07:30:00Z").
std::string utc_timestamp();

/// CSV rendering of one table: '#' comment lines (timestamp, then every
/// config entry) followed by the column header and the quoted rows. All
/// lines except the timestamp comment are deterministic for a fixed config.
std::string render_csv(const ReportBundle& bundle, const ReportTable& table);

/// One JSON document for the whole bundle: schema_version, command,
/// timestamp, config object, and each table as an array of row objects.
std::string render_json(const ReportBundle& bundle);

/// Self-contained SVG for one heatmap.
std::string render_svg(const HeatmapSpec& heatmap);

/// Write the bundle under `dir` (created if missing): table CSVs when "csv"
/// is requested, `<command>.json` when "json" is, heatmap SVGs when "svg"
/// is. Returns the paths written, in write order.
std::vector<std::string> write_bundle(const ReportBundle& bundle, const std::string& dir,
                                      const std::vector<std::string>& formats);

// ---------------------------------------------------------------------------
// Table builders for the library's result types.

ReportTable spectrum_table(const Spectrum& spectrum);
ReportTable spectrum_meta_table(const Spectrum& spectrum);
ReportTable hypothesis_table(const HypothesisReport& report);
ReportTable hypothesis_constants_table(const HypothesisReport& report);
ReportTable identity_table(const std::vector<IdentityResidualReport>& reports);
ReportTable cutoff_table(const std::vector<CutoffErrorRow>& rows);
ReportTable sweep_sample_table(const SweepResult& result);
ReportTable sweep_norm_table(const SweepResult& result);
ReportTable sweep_summary_table(const SweepResult& result);

/// Number formatting used in every table: shortest decimal that round-trips.
std::string report_number(double v);

}  // namespace robinspec
