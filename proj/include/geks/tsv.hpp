#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "geks/dataset.hpp"
#include "geks/errors.hpp"
#include "geks/matrix.hpp"

namespace geks {

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline double parse_cell(const std::string& cell, const std::string& file, std::size_t row,
                         std::size_t col) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError(file + ": non-numeric value '" + cell + "' at row " +
                     std::to_string(row) + ", col " + std::to_string(col));
  return value;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  Table table;
  std::string line;
  std::size_t data_row = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_tabs(line);
    if (!have_header) {
      table.header = cells;
      have_header = true;
      continue;
    }
    ++data_row;
    if (cells.size() != table.header.size())
      throw ParseError(path + ": row " + std::to_string(data_row) + " has " +
                       std::to_string(cells.size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    std::vector<double> values;
    values.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      values.push_back(parse_cell(cells[c], path, data_row, c + 1));
    table.rows.push_back(std::move(values));
  }
  if (!have_header) throw ParseError(path + ": missing header row");
  return table;
}

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Phenotype TSV: header row with a `y` outcome column and an `s` environment
// column; every non-`y` column becomes a covariate, in file order, behind a
// prepended intercept. Genotype TSV: header row of SNP names, one row of
// dosages per individual.
inline Dataset load_dataset(const std::string& pheno_path, const std::string& geno_path) {
  const detail::Table pheno = detail::read_table(pheno_path);
  const detail::Table geno = detail::read_table(geno_path);

  std::size_t y_col = pheno.header.size();
  std::size_t s_col = pheno.header.size();
  for (std::size_t j = 0; j < pheno.header.size(); ++j) {
    if (pheno.header[j] == "y") y_col = j;
    if (pheno.header[j] == "s") s_col = j;
  }
  if (y_col == pheno.header.size())
    throw ParseError(pheno_path + ": missing required column 'y'");
  if (s_col == pheno.header.size())
    throw ParseError(pheno_path + ": missing required column 's'");

  const std::size_t n = pheno.rows.size();
  if (n == 0) throw ParseError(pheno_path + ": no data rows");
  if (geno.rows.size() != n)
    throw DimensionMismatch("phenotype file has " + std::to_string(n) +
                            " rows but genotype file has " +
                            std::to_string(geno.rows.size()));

  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = pheno.rows[i][y_col];
    if (v != 0.0 && v != 1.0)
      throw ParseError(pheno_path + ": outcome must be 0 or 1 at row " +
                       std::to_string(i + 1) + ", col " + std::to_string(y_col + 1));
    y[i] = static_cast<int>(v);
  }

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = pheno.rows[i][s_col];

  const std::size_t q = pheno.header.size();  // intercept replaces the y column
  Matrix x(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    std::size_t out = 1;
    for (std::size_t j = 0; j < pheno.header.size(); ++j) {
      if (j == y_col) continue;
      x(i, out++) = pheno.rows[i][j];
    }
  }

  const std::size_t p = geno.header.size();
  Matrix z(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) z(i, j) = geno.rows[i][j];

  return Dataset(std::move(y), std::move(x), std::move(s), std::move(z));
}

// Writers used by the `simulate` subcommand; dosages and covariates keep
// full precision so a round trip reproduces the dataset exactly.
inline void write_pheno_tsv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << "y\ts";
  for (std::size_t j = 1; j < data.q(); ++j)
    if (j != data.env_col()) out << "\tc" << j;
  out << "\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << data.y()[i] << '\t' << detail::format_full(data.s()[i]);
    for (std::size_t j = 1; j < data.q(); ++j)
      if (j != data.env_col()) out << '\t' << detail::format_full(data.x()(i, j));
    out << "\n";
  }
}

inline void write_geno_tsv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  for (std::size_t j = 0; j < data.p(); ++j) out << (j ? "\t" : "") << "snp" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.p(); ++j)
      out << (j ? "\t" : "") << detail::format_full(data.z()(i, j));
    out << "\n";
  }
}

// Square numeric matrix without header, for user-precomputed kernels.
inline Matrix load_kernel_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const std::vector<std::string> cells = detail::split_tabs(line);
    std::vector<double> values;
    values.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      values.push_back(detail::parse_cell(cells[c], path, row, c + 1));
    if (!rows.empty() && values.size() != rows.front().size())
      throw ParseError(path + ": row " + std::to_string(row) + " has " +
                       std::to_string(values.size()) + " fields, expected " +
                       std::to_string(rows.front().size()));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(path + ": empty kernel file");
  if (rows.size() != rows.front().size())
    throw DimensionMismatch(path + ": kernel matrix must be square, got " +
                            std::to_string(rows.size()) + "x" +
                            std::to_string(rows.front().size()));
  Matrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace geks
