#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lrcc/evaluation.hpp"

namespace lrcc::io {

/// A numeric table with one header label per column.
struct LabeledMatrix {
  std::vector<std::string> labels;
  Matrix values;
};

/// Comma-separated, '.' decimal, header row required. Ragged rows, empty or non-numeric
/// cells raise DataError with the offending line and column.
LabeledMatrix parse_csv(std::istream& in, const std::string& source = "<stream>");
LabeledMatrix read_csv(const std::filesystem::path& path);

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& labels);
void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& labels);

/// Data file: n rows (samples) x p columns (nodes). Returns labels and X as p x n.
LabeledMatrix read_samples(const std::filesystem::path& path);

/// Subtracts each row mean and divides by the row standard deviation (1/n normalization).
/// A row whose standard deviation is below 1e-12 times its largest magnitude (or exactly
/// zero) raises DataError naming the label.
void standardize_rows(Matrix& x, const std::vector<std::string>& labels);

/// Edge list `i,j,weight[,label_i,label_j]` with 0-based indices and a header line.
void write_edges(std::ostream& out, const std::vector<Edge>& edges,
                 const std::vector<std::string>& labels = {});
void write_edges(const std::filesystem::path& path, const std::vector<Edge>& edges,
                 const std::vector<std::string>& labels = {});
/// Reads an edge list over p nodes; trailing label columns are ignored.
GraphTopology read_edges(const std::filesystem::path& path, Index p);

/// Coordinates file with header, one row per sensor and two columns.
SensorLayout read_layout(const std::filesystem::path& path);

void write_roc(std::ostream& out, const RocCurve& curve);
void write_roc(const std::filesystem::path& path, const RocCurve& curve);

void write_text(const std::filesystem::path& path, const std::string& text);

/// "v0", "v1", ...
std::vector<std::string> default_labels(Index p);

/// Shortest round-trip representation of a double.
std::string format_double(double x);

}  // namespace lrcc::io
