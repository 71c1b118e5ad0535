#include "cliquesim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cliquesim {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string fmt_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

// One bar group per sealer; the malicious sealers are drawn in a second colour.
void draw_panel(std::ostringstream& svg, const RunReport& report, double x0, double y0, double w, double h,
                const std::string& title, const std::vector<std::size_t>& values) {
  const std::size_t maxv = std::max<std::size_t>(1, *std::max_element(values.begin(), values.end()));
  const double plot_x = x0 + 60, plot_y = y0 + 40, plot_w = w - 80, plot_h = h - 90;
  svg << "<text x=\"" << x0 + w / 2 << "\" y=\"" << y0 + 22 << "\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  svg << "<line x1=\"" << plot_x << "\" y1=\"" << plot_y + plot_h << "\" x2=\"" << plot_x + plot_w << "\" y2=\""
      << plot_y + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << plot_x << "\" y1=\"" << plot_y << "\" x2=\"" << plot_x << "\" y2=\"" << plot_y + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = static_cast<double>(maxv) * tick / 4.0;
    const double y = plot_y + plot_h - plot_h * tick / 4.0;
    svg << "<text x=\"" << plot_x - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << fmt_double(v, 0) << "</text>\n";
  }
  const double slot = plot_w / static_cast<double>(values.size());
  const double bar_w = slot * 0.6;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double bh = plot_h * static_cast<double>(values[i]) / static_cast<double>(maxv);
    const double bx = plot_x + slot * static_cast<double>(i) + (slot - bar_w) / 2;
    const bool bad = report.per_sealer[i].kind == PolicyKind::malicious;
    svg << "<rect x=\"" << fmt_double(bx, 2) << "\" y=\"" << fmt_double(plot_y + plot_h - bh, 2) << "\" width=\""
        << fmt_double(bar_w, 2) << "\" height=\"" << fmt_double(bh, 2) << "\" fill=\""
        << (bad ? "#c0392b" : "#2e86c1") << "\"/>\n";
    svg << "<text x=\"" << fmt_double(bx + bar_w / 2, 2) << "\" y=\"" << fmt_double(plot_y + plot_h - bh - 4, 2)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << values[i] << "</text>\n";
    svg << "<text x=\"" << fmt_double(bx + bar_w / 2, 2) << "\" y=\"" << plot_y + plot_h + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">Sealer" << i << "</text>\n";
  }
  svg << "<text x=\"" << plot_x + plot_w / 2 << "\" y=\"" << y0 + h - 16
      << "\" text-anchor=\"middle\" font-size=\"12\">sealer</text>\n";
}

}  // namespace

double RunReport::malicious_share() const {
  if (height == 0) return 0.0;
  std::size_t bad = 0;
  for (const auto& s : per_sealer)
    if (s.kind == PolicyKind::malicious) bad += s.canonical_blocks;
  return static_cast<double>(bad) / static_cast<double>(height);
}

std::string format_block_log(const RunReport& report, LogFormat format) {
  std::string out;
  if (format == LogFormat::csv) out += "number,addr,difficulty,time_ms,tx_count\n";
  for (const auto& r : report.block_log) {
    out += std::to_string(r.number);
    if (format == LogFormat::plain) {
      out += ' ' + r.sealer_addr + ' ' + std::to_string(r.difficulty) + '\n';
    } else {
      out += ',' + r.sealer_addr + ',' + std::to_string(r.difficulty) + ',' + std::to_string(r.sim_time_ms) + ',' +
             std::to_string(r.tx_count) + '\n';
    }
  }
  return out;
}

void export_block_log(const RunReport& report, const std::filesystem::path& path, LogFormat format) {
  write_file(path, format_block_log(report, format));
}

std::string render_chart_svg(const RunReport& report) {
  const double panel_w = 460, panel_h = 340;
  std::vector<std::size_t> blocks, txs;
  for (const auto& s : report.per_sealer) {
    blocks.push_back(s.canonical_blocks);
    txs.push_back(s.canonical_txs);
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel_w * 2 << "\" height=\"" << panel_h
      << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!blocks.empty()) {
    draw_panel(svg, report, 0, 0, panel_w, panel_h, "Canonical blocks per sealer", blocks);
    draw_panel(svg, report, panel_w, 0, panel_w, panel_h, "Canonical transactions per sealer", txs);
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_chart(const RunReport& report, const std::filesystem::path& path) {
  write_file(path, render_chart_svg(report));
}

std::string format_summary(const RunReport& report) {
  std::ostringstream out;
  const auto& c = report.config;
  out << "scenario " << c.name << " seed " << c.seed << " sealers " << c.n_sealers << " flags "
      << to_string(c.flags) << "\n";
  out << "height " << report.height << " canonical_txs " << report.canonical_txs << " generated_txs "
      << report.generated_txs << "\n";
  for (std::size_t i = 0; i < report.per_sealer.size(); ++i) {
    const auto& s = report.per_sealer[i];
    out << "sealer " << i << " " << s.addr << " " << (s.kind == PolicyKind::honest ? "honest" : "malicious")
        << " blocks " << s.canonical_blocks << " txs " << s.canonical_txs << " sealed " << s.sealed_blocks;
    for (std::size_t r = 0; r < kRejectReasonCount; ++r)
      out << " " << to_string(static_cast<RejectReason>(r)) << " " << s.rejected_by_reason[r];
    out << "\n";
  }
  out << "malicious_share " << fmt_double(report.malicious_share(), 4) << "\n";
  return out.str();
}

}  // namespace cliquesim
