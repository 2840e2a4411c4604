#include "causnet/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace causnet {

CausalityMatrix CausalityMatrix::zeros(Index k, std::string measure) {
  CausalityMatrix out{Matrix::Zero(k, k), std::move(measure)};
  out.values.diagonal().setConstant(kDiagonal);
  return out;
}

AdjacencyNetwork::AdjacencyNetwork(IntMatrix adjacency, std::string criterion)
    : adj_(std::move(adjacency)), criterion_(std::move(criterion)) {
  if (adj_.rows() != adj_.cols()) throw Error(ErrorCode::DimensionMismatch, "adjacency must be square");
  for (Index i = 0; i < adj_.rows(); ++i) {
    for (Index j = 0; j < adj_.cols(); ++j) {
      const int a = adj_(i, j);
      if (a != 0 && a != 1) throw Error(ErrorCode::InvalidArgument, "adjacency entries must be 0 or 1");
      if (i == j && a != 0) throw Error(ErrorCode::InvalidArgument, "adjacency diagonal must be zero");
    }
  }
}

AdjacencyNetwork AdjacencyNetwork::empty(Index k, std::string criterion) {
  return AdjacencyNetwork(IntMatrix::Zero(k, k), std::move(criterion));
}

void AdjacencyNetwork::set_edge(Index i, Index j, bool on) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "self loops are not allowed");
  adj_(i, j) = on ? 1 : 0;
}

int AdjacencyNetwork::edge_count() const { return adj_.sum(); }

namespace io {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size();
}

std::vector<std::vector<double>> read_rows(std::istream& in, std::vector<std::string>* header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty() || fields.front().starts_with('#')) continue;
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size(); ++c) numeric = numeric && parse_double(fields[c], row[c]);
    if (!numeric) {
      if (first && header != nullptr) {
        *header = std::move(fields);
        first = false;
        continue;
      }
      throw Error(ErrorCode::ParseError, "non-numeric field on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, "ragged row on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  }
  return m;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

void write_value(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
  } else {
    out << v;
  }
}

}  // namespace

TimeSeriesSet read_time_series(std::istream& in) {
  std::vector<std::string> header;
  const auto rows = read_rows(in, &header);
  if (rows.empty()) throw Error(ErrorCode::ParseError, "no data rows");
  if (!header.empty() && header.size() != rows.front().size()) {
    throw Error(ErrorCode::ParseError, "header label count does not match column count");
  }
  return TimeSeriesSet(to_matrix(rows), std::move(header));
}

TimeSeriesSet read_time_series(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_time_series(in);
}

void write_time_series(std::ostream& out, const TimeSeriesSet& ts, bool header) {
  if (header) {
    for (std::size_t c = 0; c < ts.labels().size(); ++c) out << (c ? " " : "") << ts.labels()[c];
    out << '\n';
  }
  write_matrix(out, ts.data());
}

void write_time_series(const std::filesystem::path& path, const TimeSeriesSet& ts, bool header) {
  auto out = open_out(path);
  write_time_series(out, ts, header);
}

Matrix read_matrix(std::istream& in) { return to_matrix(read_rows(in, nullptr)); }

Matrix read_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  const auto old = out.precision(17);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      write_value(out, m(r, c));
    }
    out << '\n';
  }
  out.precision(old);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

AdjacencyNetwork read_adjacency(std::istream& in) {
  const Matrix m = read_matrix(in);
  if (m.rows() != m.cols()) throw Error(ErrorCode::ParseError, "adjacency file is not square");
  IntMatrix a(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v != 0.0 && v != 1.0) throw Error(ErrorCode::ParseError, "adjacency entries must be 0 or 1");
      a(i, j) = static_cast<int>(v);
    }
  }
  return AdjacencyNetwork(std::move(a));
}

AdjacencyNetwork read_adjacency(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_adjacency(in);
}

void write_adjacency(std::ostream& out, const AdjacencyNetwork& net) {
  const auto& a = net.adjacency();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? " " : "") << a(i, j);
    out << '\n';
  }
}

void write_adjacency(const std::filesystem::path& path, const AdjacencyNetwork& net) {
  auto out = open_out(path);
  write_adjacency(out, net);
}

}  // namespace io
}  // namespace causnet
