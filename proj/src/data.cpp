#include "evkmeans/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "evkmeans/errors.hpp"

namespace evkmeans {

namespace {

double parse_double(std::string_view token, const char* what, std::size_t line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DataFormatError(std::string("invalid ") + what + " '" + std::string(token) +
                          "' on line " + std::to_string(line_no));
  }
  return value;
}

// Labels arrive as arbitrary numeric values; remap them to 0..k-1 in the
// order they are first seen.
std::vector<int> remap_labels(const std::vector<double>& raw) {
  std::map<double, int> ids;
  std::vector<int> out;
  out.reserve(raw.size());
  for (const double v : raw) {
    const auto it = ids.emplace(v, static_cast<int>(ids.size())).first;
    out.push_back(it->second);
  }
  return out;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void write_full_precision(std::string& buf, double v) {
  char tmp[32];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  buf += tmp;
}

}  // namespace

Dataset gen_synthetic(const SynthConfig& cfg) {
  if (cfg.n < 1 || cfg.k < 1 || cfg.k > cfg.n || cfg.d < 1 ||
      !(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw std::invalid_argument("gen_synthetic requires n >= k >= 1, d >= 1, sigma > 0");
  }
  Rng rng(cfg.seed);
  Matrix centroids(cfg.k, cfg.d);
  for (int j = 0; j < cfg.k; ++j) {
    for (int dim = 0; dim < cfg.d; ++dim) {
      centroids(j, dim) = rng.uniform_range(-1.0, 1.0);
    }
  }

  Dataset ds;
  ds.x.resize(cfg.n, cfg.d);
  ds.y.emplace();
  ds.y->reserve(static_cast<std::size_t>(cfg.n));
  const int base = cfg.n / cfg.k;
  const int rem = cfg.n % cfg.k;
  Eigen::Index row = 0;
  for (int j = 0; j < cfg.k; ++j) {
    const int count = base + (j < rem ? 1 : 0);
    for (int s = 0; s < count; ++s, ++row) {
      for (int dim = 0; dim < cfg.d; ++dim) {
        ds.x(row, dim) = centroids(j, dim) + cfg.sigma * rng.normal();
      }
      ds.y->push_back(j);
    }
  }

  std::ostringstream name;
  name << "synth-n" << cfg.n << "-k" << cfg.k << "-d" << cfg.d << "-sigma"
       << cfg.sigma << "-seed" << cfg.seed;
  ds.name = name.str();
  return ds;
}

Dataset add_uninformative(const Dataset& ds, int extra_d, Rng& rng) {
  if (extra_d < 0) {
    throw std::invalid_argument("add_uninformative requires extra_d >= 0");
  }
  Dataset out;
  out.y = ds.y;
  out.name = ds.name + "+e" + std::to_string(extra_d);
  out.x.resize(ds.n(), ds.d() + extra_d);
  out.x.leftCols(ds.d()) = ds.x;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (int e = 0; e < extra_d; ++e) {
      out.x(i, ds.d() + e) = rng.normal();
    }
  }
  return out;
}

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> raw_labels;
  Eigen::Index max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;  // blank line
    raw_labels.push_back(parse_double(token, "label", line_no));

    std::vector<std::pair<int, double>> entries;
    while (ls >> token) {
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
        throw DataFormatError("malformed feature '" + token + "' on line " +
                              std::to_string(line_no));
      }
      const double idx_raw = parse_double(token.substr(0, colon), "feature index", line_no);
      const int idx = static_cast<int>(idx_raw);
      if (idx < 1 || static_cast<double>(idx) != idx_raw) {
        throw DataFormatError("feature index must be a positive integer on line " +
                              std::to_string(line_no));
      }
      const double val = parse_double(token.substr(colon + 1), "feature value", line_no);
      if (!std::isfinite(val)) {
        throw DataFormatError("non-finite feature value on line " + std::to_string(line_no));
      }
      for (const auto& entry : entries) {
        if (entry.first == idx) {
          throw DataFormatError("duplicate feature index " + std::to_string(idx) +
                                " on line " + std::to_string(line_no));
        }
      }
      entries.emplace_back(idx, val);
      max_index = std::max<Eigen::Index>(max_index, idx);
    }
    std::sort(entries.begin(), entries.end());
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw IoError("'" + path + "' holds no data");

  Dataset ds;
  ds.x = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), std::max<Eigen::Index>(max_index, 1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [idx, val] : rows[i]) {
      ds.x(static_cast<Eigen::Index>(i), idx - 1) = val;
    }
  }
  ds.y = remap_labels(raw_labels);
  ds.name = stem_of(path);
  return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  std::string buf;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    buf.clear();
    buf += std::to_string(ds.y ? (*ds.y)[static_cast<std::size_t>(i)] : 0);
    for (Eigen::Index dim = 0; dim < ds.d(); ++dim) {
      const double v = ds.x(i, dim);
      if (v == 0.0) continue;
      buf += ' ';
      buf += std::to_string(dim + 1);
      buf += ':';
      write_full_precision(buf, v);
    }
    buf += '\n';
    out << buf;
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

Dataset load_csv(const std::string& path, bool has_labels, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
      throw DataFormatError("empty row " + std::to_string(line_no));
    }
    std::vector<double> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t stop = line.find(delimiter, start);
      const std::string_view cell(line.data() + start,
                                  (stop == std::string::npos ? line.size() : stop) - start);
      const double v = parse_double(cell, "value", line_no);
      if (!std::isfinite(v)) {
        throw DataFormatError("non-finite value on row " + std::to_string(line_no));
      }
      fields.push_back(v);
      if (stop == std::string::npos) break;
      start = stop + 1;
    }
    if (width == 0) {
      width = fields.size();
      if (has_labels && width < 2) {
        throw DataFormatError("need at least one feature besides the label column");
      }
    } else if (fields.size() != width) {
      throw DataFormatError("row " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(width));
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw IoError("'" + path + "' holds no data");

  const std::size_t d = width - (has_labels ? 1 : 0);
  Dataset ds;
  ds.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  std::vector<double> raw_labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t dim = 0; dim < d; ++dim) {
      ds.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(dim)) = rows[i][dim];
    }
    if (has_labels) raw_labels.push_back(rows[i][d]);
  }
  if (has_labels) ds.y = remap_labels(raw_labels);
  ds.name = stem_of(path);
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  std::string buf;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    buf.clear();
    for (Eigen::Index dim = 0; dim < ds.d(); ++dim) {
      if (dim > 0) buf += delimiter;
      write_full_precision(buf, ds.x(i, dim));
    }
    if (ds.y) {
      buf += delimiter;
      buf += std::to_string((*ds.y)[static_cast<std::size_t>(i)]);
    }
    buf += '\n';
    out << buf;
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

Dataset standardize(const Dataset& ds, bool center) {
  Dataset out;
  out.x = ds.x;
  out.y = ds.y;
  out.name = ds.name;
  const double n = static_cast<double>(ds.n());
  if (ds.n() < 1) throw std::invalid_argument("standardize requires a non-empty dataset");
  for (Eigen::Index dim = 0; dim < ds.d(); ++dim) {
    const double mean = ds.x.col(dim).mean();
    double ss = 0.0;
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
      const double delta = ds.x(i, dim) - mean;
      ss += delta * delta;
    }
    const double sd = ds.n() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    if (sd <= 0.0 || !std::isfinite(sd)) continue;  // zero-variance column untouched
    if (center) {
      out.x.col(dim) = (ds.x.col(dim).array() - mean) / sd;
    } else {
      out.x.col(dim) = ds.x.col(dim) / sd;
    }
  }
  return out;
}

}  // namespace evkmeans
