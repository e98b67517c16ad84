#include "lrcc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lrcc/errors.hpp"

namespace lrcc::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && end == cell.data() + cell.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::DataError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::DataError, "cannot write " + path.string());
  return out;
}

bool blank(std::string_view line) { return trim(line).empty(); }

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::vector<std::string> default_labels(Index p) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) labels.push_back("v" + std::to_string(i));
  return labels;
}

LabeledMatrix parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!blank(line)) break;
  }
  require(!blank(line), ErrorCode::DataError, source + ": missing header row");

  LabeledMatrix table;
  for (auto cell : split(line)) table.labels.push_back(unquote(cell));
  const std::size_t cols = table.labels.size();
  for (std::size_t j = 0; j < cols; ++j) {
    double dummy;
    require(!parse_number(table.labels[j], dummy), ErrorCode::DataError,
            source + ": header row is required (found numeric cell '" + table.labels[j] + "')");
  }

  std::vector<double> values;
  std::size_t rows = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split(line);
    require(cells.size() == cols, ErrorCode::DataError,
            source + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                " cells, found " + std::to_string(cells.size()));
    for (std::size_t j = 0; j < cols; ++j) {
      double v;
      require(parse_number(cells[j], v) && std::isfinite(v), ErrorCode::DataError,
              source + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                  std::string(cells[j]) + "' in column '" + table.labels[j] + "'");
      values.push_back(v);
    }
    ++rows;
  }
  table.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      table.values(static_cast<Index>(i), static_cast<Index>(j)) = values[i * cols + j];
  return table;
}

LabeledMatrix read_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& labels) {
  require(static_cast<Index>(labels.size()) == values.cols(), ErrorCode::DimensionMismatch,
          "label count does not match column count");
  for (std::size_t j = 0; j < labels.size(); ++j) out << (j ? "," : "") << labels[j];
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& labels) {
  auto out = open_out(path);
  write_csv(out, values, labels);
}

LabeledMatrix read_samples(const std::filesystem::path& path) {
  LabeledMatrix table = read_csv(path);
  require(table.values.rows() >= 1, ErrorCode::DataError, path.string() + ": no data rows");
  table.values.transposeInPlace();
  return table;
}

void standardize_rows(Matrix& x, const std::vector<std::string>& labels) {
  const double n = static_cast<double>(x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double scale = x.row(i).cwiseAbs().maxCoeff();
    x.row(i).array() -= x.row(i).mean();
    const double sd = std::sqrt(x.row(i).squaredNorm() / n);
    const std::string name = i < static_cast<Index>(labels.size()) ? labels[static_cast<std::size_t>(i)]
                                                                     : std::to_string(i);
    require(sd > 0.0 && sd > 1e-12 * scale, ErrorCode::DataError,
            "column '" + name + "' is constant and cannot be standardized");
    x.row(i) /= sd;
  }
}

void write_edges(std::ostream& out, const std::vector<Edge>& edges,
                 const std::vector<std::string>& labels) {
  const bool named = !labels.empty();
  out << "i,j,weight" << (named ? ",label_i,label_j" : "") << '\n';
  for (const Edge& e : edges) {
    out << e.i << ',' << e.j << ',' << format_double(e.weight);
    if (named) out << ',' << labels.at(static_cast<std::size_t>(e.i)) << ',' << labels.at(static_cast<std::size_t>(e.j));
    out << '\n';
  }
}

void write_edges(const std::filesystem::path& path, const std::vector<Edge>& edges,
                 const std::vector<std::string>& labels) {
  auto out = open_out(path);
  write_edges(out, edges, labels);
}

GraphTopology read_edges(const std::filesystem::path& path, Index p) {
  require(p >= 1, ErrorCode::InvalidArgument, "node count must be >= 1");
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Edge> edges;
  while (next_line(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split(line);
    double i, j, w = 1.0;
    const bool numeric = cells.size() >= 2 && parse_number(cells[0], i) && parse_number(cells[1], j);
    if (!numeric && edges.empty() && line_no == 1) continue;  // header
    const std::string where = path.string() + ":" + std::to_string(line_no);
    require(numeric, ErrorCode::DataError, where + ": expected 'i,j[,weight]'");
    if (cells.size() >= 3)
      require(parse_number(cells[2], w), ErrorCode::DataError, where + ": non-numeric weight");
    require(i == std::floor(i) && j == std::floor(j) && i >= 0 && j >= 0 && i < p && j < p,
            ErrorCode::DataError, where + ": node index out of range [0, " + std::to_string(p) + ")");
    edges.push_back({static_cast<Index>(i), static_cast<Index>(j), w});
  }
  try {
    return GraphTopology::from_edges(p, edges);
  } catch (const Error& e) {
    throw Error(ErrorCode::DataError, path.string() + ": " + e.what());
  }
}

SensorLayout read_layout(const std::filesystem::path& path) {
  LabeledMatrix table = read_csv(path);
  require(table.values.cols() == 2, ErrorCode::DataError,
          path.string() + ": coordinates need exactly two columns");
  require(table.values.rows() >= 2, ErrorCode::DataError, path.string() + ": need >= 2 sensors");
  return SensorLayout{std::move(table.values)};
}

void write_roc(std::ostream& out, const RocCurve& curve) {
  out << "threshold,fpr,tpr\n";
  for (const RocPoint& pt : curve.points)
    out << format_double(pt.threshold) << ',' << format_double(pt.fpr) << ',' << format_double(pt.tpr) << '\n';
}

void write_roc(const std::filesystem::path& path, const RocCurve& curve) {
  auto out = open_out(path);
  write_roc(out, curve);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace lrcc::io
