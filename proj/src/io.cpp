#include "loctime/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "loctime/errors.hpp"

namespace loctime {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CsvWriter::CsvWriter(const std::string& path, const CsvMeta& meta, const std::vector<std::string>& header)
    : out_(path), path_(path), width_(header.size()) {
  if (!out_) throw ParameterError("cannot open '" + path + "' for writing");
  out_ << "# loctime " << LOCTIME_VERSION << " seed=" << meta.seed << " config_hash=" << hex64(meta.config_hash)
       << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw ParameterError("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
  if (!out_) throw ParameterError("write to '" + path_ + "' failed");
}

void CsvWriter::row_numbers(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(fmt(v));
  row(s);
}

void write_field_csv(const std::string& path, const LatticeDomain& domain, const std::vector<FieldSample>& samples,
                     const CsvMeta& meta) {
  CsvWriter w(path, meta, {"x_i", "x_j", "value", "replicate"});
  for (const auto& s : samples) {
    if (s.values.size() != domain.size()) throw ParameterError("sample does not match the domain");
    for (std::uint32_t v = 0; v < domain.size(); ++v)
      w.row({std::to_string(domain.site(v).i), std::to_string(domain.site(v).j), fmt(s.values[v]),
             std::to_string(s.replicate)});
  }
}

void write_measure_csv(const std::string& path, const PointMeasure& m, const CsvMeta& meta, std::uint64_t replicate) {
  std::vector<std::string> header{"replicate", "kind", "x", "y", "h", "weight"};
  if (m.radius >= 0)
    for (int i = -m.radius; i <= m.radius; ++i)
      for (int j = -m.radius; j <= m.radius; ++j) header.push_back("p_" + std::to_string(i) + "_" + std::to_string(j));
  CsvWriter w(path, meta, header);
  for (const auto& a : m.atoms) {
    std::vector<std::string> r{std::to_string(replicate), level_kind_name(m.kind), fmt(a.x), fmt(a.y),
                               a.value ? fmt(*a.value) : "", fmt(m.weight_per_atom)};
    for (double p : a.profile) r.push_back(fmt(p));
    w.row(r);
  }
}

void write_qsequence_csv(const std::string& path, const QSequence& q, const CsvMeta& meta) {
  CsvWriter w(path, meta, {"n", "q_n"});
  for (std::size_t n = 0; n < q.q.size(); ++n) w.row({std::to_string(n), fmt(q.q[n])});
}

void write_grid_csv(const std::string& path, const ContinuumGrid& g, const CsvMeta& meta) {
  CsvWriter w(path, meta, {"x", "y", "value"});
  for (std::size_t k = 0; k < g.values.size(); ++k) w.row({fmt(g.points[k][0]), fmt(g.points[k][1]), fmt(g.values[k])});
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ParameterError("write to '" + path + "' failed");
}

void write_svg_histogram(const std::string& path, const std::vector<double>& values, int bins,
                         const std::string& title) {
  if (values.empty() || bins < 1) throw ParameterError("histogram needs values and bins >= 1");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1.0;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  const int top = *std::max_element(counts.begin(), counts.end());
  const double W = 640, H = 400, pad = 40;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  s << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  const double bw = (W - 2 * pad) / bins;
  for (int b = 0; b < bins; ++b) {
    const double h = (H - 2 * pad) * counts[static_cast<std::size_t>(b)] / std::max(top, 1);
    s << "<rect x=\"" << pad + b * bw << "\" y=\"" << H - pad - h << "\" width=\"" << bw * 0.95 << "\" height=\"" << h
      << "\" fill=\"#4a7ab5\"/>\n";
  }
  s << "<text x=\"" << pad << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lo)
    << "</text>\n";
  s << "<text x=\"" << W - pad - 60 << "\" y=\"" << H - 12 << "\" font-family=\"sans-serif\" font-size=\"11\">"
    << fmt(hi) << "</text>\n";
  s << "</svg>\n";
  write_text(path, s.str());
}

}  // namespace loctime
