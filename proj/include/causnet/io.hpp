#pragma once

#include <filesystem>
#include <iosfwd>

#include "causnet/core_data.hpp"
#include "causnet/networks.hpp"

namespace causnet::io {

/// One row per time point; whitespace- or comma-delimited; an optional
/// first line of non-numeric tokens is taken as channel labels.
TimeSeriesSet read_time_series(std::istream& in);
TimeSeriesSet read_time_series(const std::filesystem::path& path);
void write_time_series(std::ostream& out, const TimeSeriesSet& ts, bool header = true);
void write_time_series(const std::filesystem::path& path, const TimeSeriesSet& ts, bool header = true);

/// Row-major, space-delimited real matrix. "nan" is accepted and written
/// for the unused diagonal of causality matrices.
Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// K lines of K space-separated 0/1 entries.
AdjacencyNetwork read_adjacency(std::istream& in);
AdjacencyNetwork read_adjacency(const std::filesystem::path& path);
void write_adjacency(std::ostream& out, const AdjacencyNetwork& net);
void write_adjacency(const std::filesystem::path& path, const AdjacencyNetwork& net);

}  // namespace causnet::io
