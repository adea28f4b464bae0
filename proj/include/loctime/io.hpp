#pragma once

// CSV/JSON/SVG writers. Every CSV starts with a '#' metadata line
// (version, seed, config hash) followed by a header row.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "loctime/continuum.hpp"
#include "loctime/gaussian_fields.hpp"
#include "loctime/lattice_domain.hpp"
#include "loctime/level_sets.hpp"

namespace loctime {

struct CsvMeta {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const CsvMeta& meta, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void row_numbers(const std::vector<double>& cells);

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t width_;
};

// Shortest round-trip decimal text for a double.
std::string fmt(double v);
std::string hex64(std::uint64_t v);
// FNV-1a over the bytes of s.
std::uint64_t fnv1a(const std::string& s);

void write_field_csv(const std::string& path, const LatticeDomain& domain, const std::vector<FieldSample>& samples,
                     const CsvMeta& meta);
void write_measure_csv(const std::string& path, const PointMeasure& m, const CsvMeta& meta,
                       std::uint64_t replicate = 0);
void write_qsequence_csv(const std::string& path, const QSequence& q, const CsvMeta& meta);
void write_grid_csv(const std::string& path, const ContinuumGrid& g, const CsvMeta& meta);
void write_text(const std::string& path, const std::string& text);

// Bar histogram of the values as a standalone SVG file.
void write_svg_histogram(const std::string& path, const std::vector<double>& values, int bins,
                         const std::string& title);

}  // namespace loctime
