#include "robinspec/reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace robinspec {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string bool_cell(bool b) { return b ? "true" : "false"; }

std::string complex_cell(cplx z) {
  return report_number(z.real()) + (z.imag() < 0 ? "" : "+") + report_number(z.imag()) + "i";
}

ReportTable key_value_table(std::string name,
                            std::vector<std::pair<std::string, std::string>> rows) {
  ReportTable table;
  table.name = std::move(name);
  table.columns = {"field", "value"};
  for (auto& [k, v] : rows) table.rows.push_back({std::move(k), std::move(v)});
  return table;
}

// Five-stop heat palette, dark blue -> cyan -> green -> orange -> dark red.
std::string heat_color(double t) {
  static const int stops[5][3] = {
      {48, 18, 59}, {40, 187, 236}, {162, 252, 60}, {251, 126, 33}, {122, 4, 3}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * 4.0;
  const int k = std::min(3, static_cast<int>(pos));
  const double frac = pos - k;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + frac * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + frac * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + frac * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string report_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render_csv(const ReportBundle& bundle, const ReportTable& table) {
  std::ostringstream out;
  out << "# generated_at = " << bundle.timestamp << "\n";
  for (const auto& [key, value] : bundle.config) out << "# " << key << " = " << value << "\n";
  std::vector<std::string> cells;
  for (const std::string& c : table.columns) cells.push_back(csv_escape(c));
  out << join(cells, ",") << "\r\n";
  for (const auto& row : table.rows) {
    cells.clear();
    for (const std::string& c : row) cells.push_back(csv_escape(c));
    out << join(cells, ",") << "\r\n";
  }
  return out.str();
}

std::string render_json(const ReportBundle& bundle) {
  nlohmann::json root;
  root["schema_version"] = bundle.schema_version;
  root["command"] = bundle.command;
  root["generated_at"] = bundle.timestamp;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : bundle.config) config[key] = value;
  root["config"] = config;
  nlohmann::json tables = nlohmann::json::object();
  for (const ReportTable& table : bundle.tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) {
        obj[table.columns[i]] = row[i];
      }
      rows.push_back(obj);
    }
    tables[table.name] = rows;
  }
  root["tables"] = tables;
  return root.dump(2) + "\n";
}

std::string render_svg(const HeatmapSpec& heatmap) {
  const int nx = static_cast<int>(heatmap.xs.size());
  const int ny = static_cast<int>(heatmap.ys.size());
  const int cell = 26;
  const int left = 80, top = 50, right = 30, bottom = 90;
  const int width = left + nx * cell + right;
  const int height = top + ny * cell + bottom;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : heatmap.values) {
    for (const double v : row) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  const bool any = std::isfinite(lo);
  if (!any) {
    lo = 0;
    hi = 1;
  }
  const bool log_scale = any && lo > 0 && hi / lo > 100;
  const auto normalized = [&](double v) {
    if (hi == lo) return 0.5;
    if (log_scale) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">" << xml_escape(heatmap.title) << (log_scale ? " (log color scale)" : "")
      << "</text>\n";

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = heatmap.values[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      // Rows are drawn bottom-up so increasing y-values read upward.
      const int px = left + i * cell;
      const int py = top + (ny - 1 - j) * cell;
      const std::string fill = std::isfinite(v) ? heat_color(normalized(v)) : "#bbbbbb";
      svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << fill << "\" stroke=\"white\" stroke-width=\"1\">";
      svg << "<title>" << xml_escape(heatmap.x_label) << "=" << report_number(heatmap.xs[static_cast<std::size_t>(i)])
          << " " << xml_escape(heatmap.y_label) << "=" << report_number(heatmap.ys[static_cast<std::size_t>(j)])
          << " value=" << (std::isfinite(v) ? report_number(v) : "skipped") << "</title></rect>\n";
    }
  }

  const int x_step = std::max(1, nx / 8);
  for (int i = 0; i < nx; i += x_step) {
    svg << "<text x=\"" << left + i * cell + cell / 2 << "\" y=\"" << top + ny * cell + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << report_number(heatmap.xs[static_cast<std::size_t>(i)]) << "</text>\n";
  }
  const int y_step = std::max(1, ny / 8);
  for (int j = 0; j < ny; j += y_step) {
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + (ny - 1 - j) * cell + cell / 2 + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << report_number(heatmap.ys[static_cast<std::size_t>(j)]) << "</text>\n";
  }
  svg << "<text x=\"" << left + nx * cell / 2 << "\" y=\"" << top + ny * cell + 34
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(heatmap.x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << top + ny * cell / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
      << top + ny * cell / 2 << ")\">" << xml_escape(heatmap.y_label) << "</text>\n";

  // Color legend: a horizontal bar of palette samples with end labels.
  const int bar_y = top + ny * cell + 48;
  const int bar_w = std::max(120, nx * cell / 2);
  const int chip = bar_w / 24;
  for (int s = 0; s < 24; ++s) {
    svg << "<rect x=\"" << left + s * chip << "\" y=\"" << bar_y << "\" width=\"" << chip + 1
        << "\" height=\"12\" fill=\"" << heat_color(s / 23.0) << "\"/>\n";
  }
  svg << "<text x=\"" << left << "\" y=\"" << bar_y + 26
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"start\">"
      << (any ? report_number(lo) : "none") << "</text>\n";
  svg << "<text x=\"" << left + 24 * chip << "\" y=\"" << bar_y + 26
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
      << (any ? report_number(hi) : "none") << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> write_bundle(const ReportBundle& bundle, const std::string& dir,
                                      const std::vector<std::string>& formats) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto wants = [&](const char* f) {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  };
  std::vector<std::string> written;
  const auto emit = [&](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    written.push_back(path.string());
  };
  if (wants("csv")) {
    for (const ReportTable& table : bundle.tables) {
      emit(fs::path(dir) / (table.name + ".csv"), render_csv(bundle, table));
    }
  }
  if (wants("json")) {
    emit(fs::path(dir) / (bundle.command + ".json"), render_json(bundle));
  }
  if (wants("svg")) {
    for (const HeatmapSpec& heatmap : bundle.heatmaps) {
      emit(fs::path(dir) / (heatmap.name + ".svg"), render_svg(heatmap));
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// Table builders

ReportTable spectrum_table(const Spectrum& spectrum) {
  ReportTable table;
  table.name = "eigenpairs";
  table.columns = {"index",     "re_lambda",  "im_lambda",   "residual", "localization",
                   "wall_mass", "classified", "inside_cone", "localized"};
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) {
    const EigenPair& p = spectrum.pairs[i];
    table.rows.push_back({std::to_string(i), report_number(p.eigenvalue.real()),
                          report_number(p.eigenvalue.imag()), report_number(p.residual),
                          report_number(p.localization), report_number(p.wall_mass),
                          bool_cell(p.classified), bool_cell(p.inside_cone),
                          bool_cell(p.localized)});
  }
  return table;
}

ReportTable spectrum_meta_table(const Spectrum& spectrum) {
  std::vector<std::string> shift_cells, iter_cells;
  for (const cplx s : spectrum.shifts) shift_cells.push_back(complex_cell(s));
  for (const int it : spectrum.iterations) iter_cells.push_back(std::to_string(it));
  return key_value_table("eigensolver",
                         {{"method", spectrum.method},
                          {"complete", bool_cell(spectrum.complete)},
                          {"shifts", join(shift_cells, "; ")},
                          {"iterations", join(iter_cells, "; ")},
                          {"warnings", join(spectrum.warnings, " | ")}});
}

ReportTable hypothesis_table(const HypothesisReport& report) {
  ReportTable table;
  table.name = "conditions";
  table.columns = {"condition", "pass", "margin", "detail"};
  for (const ConditionVerdict& v : report.conditions) {
    table.rows.push_back({v.id, bool_cell(v.pass), report_number(v.margin), v.detail});
  }
  table.rows.push_back({"overall", bool_cell(report.pass), "", report.theorem_id});
  return table;
}

ReportTable hypothesis_constants_table(const HypothesisReport& report) {
  return key_value_table("constants",
                         {{"theorem_id", report.theorem_id},
                          {"pass", bool_cell(report.pass)},
                          {"c_star", report_number(report.c_star)},
                          {"s_star", report_number(report.s_star)},
                          {"script_s_star", report_number(report.script_s_star)},
                          {"b1", report_number(report.b1)},
                          {"b2", report_number(report.b2)},
                          {"b2_method", report.b2_method},
                          {"smallness_value", report_number(report.smallness_value)},
                          {"supremal_c_star", report_number(report.supremal_c_star)},
                          {"warnings", join(report.warnings, " | ")}});
}

ReportTable identity_table(const std::vector<IdentityResidualReport>& reports) {
  ReportTable table;
  table.name = "identities";
  table.columns = {"identity_id", "half_width", "spacing", "lhs_re", "lhs_im",
                   "rhs_re",      "rhs_im",     "residual", "order_estimate"};
  for (const IdentityResidualReport& r : reports) {
    table.rows.push_back({r.identity_id, report_number(r.half_width), report_number(r.spacing),
                          report_number(r.lhs.real()), report_number(r.lhs.imag()),
                          report_number(r.rhs.real()), report_number(r.rhs.imag()),
                          report_number(r.residual),
                          r.order_estimate ? report_number(*r.order_estimate) : ""});
  }
  return table;
}

ReportTable cutoff_table(const std::vector<CutoffErrorRow>& rows) {
  ReportTable table;
  table.name = "cutoff_errors";
  table.columns = {"radius", "eps1", "eps2", "eps3", "eps4"};
  for (const CutoffErrorRow& r : rows) {
    table.rows.push_back({report_number(r.radius), report_number(r.eps1), report_number(r.eps2),
                          report_number(r.eps3), report_number(r.eps4)});
  }
  return table;
}

ReportTable sweep_sample_table(const SweepResult& result) {
  ReportTable table;
  table.name = "sweep_samples";
  table.columns = {"re_lambda",      "im_lambda", "sector",    "ratio_weighted",
                   "ratio_gradient", "residual",  "method",    "condition_estimate",
                   "iterations"};
  for (const ResolventSample& s : result.samples) {
    table.rows.push_back({report_number(s.lambda.real()), report_number(s.lambda.imag()),
                          s.sector_tag == SectorTag::kInside ? "inside" : "outside",
                          report_number(s.ratio_weighted), report_number(s.ratio_gradient),
                          report_number(s.solver_diag.residual), s.solver_diag.method,
                          report_number(s.solver_diag.condition_estimate),
                          std::to_string(s.solver_diag.iterations)});
  }
  return table;
}

ReportTable sweep_norm_table(const SweepResult& result) {
  ReportTable table;
  table.name = "operator_norms";
  table.columns = {"re_lambda", "im_lambda", "opnorm_proxy", "inv_distance", "proxy_x_distance",
                   "power_steps"};
  for (const LambdaNormRow& row : result.summary.operator_norms) {
    const double product =
        row.inv_distance > 0 ? row.opnorm_proxy / row.inv_distance : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back({report_number(row.lambda.real()), report_number(row.lambda.imag()),
                          report_number(row.opnorm_proxy), report_number(row.inv_distance),
                          report_number(product), std::to_string(row.power_steps)});
  }
  return table;
}

ReportTable sweep_summary_table(const SweepResult& result) {
  const SweepSummary& s = result.summary;
  return key_value_table("sweep_summary",
                         {{"sample_count", std::to_string(s.sample_count)},
                          {"sup_weighted_inside", report_number(s.sup_weighted_inside)},
                          {"sup_weighted_outside", report_number(s.sup_weighted_outside)},
                          {"sup_gradient_inside", report_number(s.sup_gradient_inside)},
                          {"sup_gradient_outside", report_number(s.sup_gradient_outside)},
                          {"no_op", bool_cell(s.no_op)},
                          {"notes", join(s.notes, " | ")}});
}

}  // namespace robinspec
