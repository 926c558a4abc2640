#include "dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "error.hpp"
#include "io_util.hpp"

namespace oer {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& cell, std::size_t line_no,
                    const std::string& col) {
  std::string t = trim(cell);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.empty())
    throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                      ": cannot parse '" + t +
                                      "' in column '" + col + "' as a number");
  if (!std::isfinite(value))
    throw Error(ErrorCode::parse, "line " + std::to_string(line_no) +
                                      ": non-finite value in column '" + col +
                                      "'");
  return value;
}

}  // namespace

std::size_t ScoredDataset::count_label(int label) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [&](const LabeledSample& s) { return s.label == label; }));
}

ScoredDataset parse_dataset(std::istream& in, const CsvSchema& schema) {
  std::string line;
  std::size_t line_no = 0;

  // header
  if (!std::getline(in, line))
    throw Error(ErrorCode::empty_input, "empty input: no header row");
  ++line_no;
  std::vector<std::string> header = split_line(line, schema.delimiter);
  for (auto& h : header) h = trim(h);

  auto find_col = [&](const std::string& name) -> std::size_t {
    std::size_t found = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) {
        if (found != header.size())
          throw Error(ErrorCode::schema,
                      "column '" + name + "' appears more than once");
        found = i;
      }
    }
    if (found == header.size())
      throw Error(ErrorCode::schema, "missing column '" + name + "'");
    return found;
  };

  std::size_t label_idx = find_col(schema.label_col);
  std::size_t score_idx = find_col(schema.score_col);
  if (label_idx == score_idx)
    throw Error(ErrorCode::schema, "label and score map to the same column");

  std::vector<std::size_t> aux_idx;
  ScoredDataset data;
  if (schema.aux_cols.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (i != label_idx && i != score_idx) {
        aux_idx.push_back(i);
        data.aux_names.push_back(header[i]);
      }
  } else {
    for (const auto& name : schema.aux_cols) {
      std::size_t i = find_col(name);
      if (i == label_idx || i == score_idx)
        throw Error(ErrorCode::schema,
                    "aux column '" + name + "' is the label or score column");
      aux_idx.push_back(i);
      data.aux_names.push_back(header[i]);
    }
  }
  if (aux_idx.empty())
    throw Error(ErrorCode::schema,
                "no auxiliary feature columns: need at least one column "
                "besides label and score");

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_line(line, schema.delimiter);
    if (cells.size() != header.size())
      throw Error(ErrorCode::parse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(cells.size()));

    LabeledSample s;
    std::string label_cell = trim(cells[label_idx]);
    if (label_cell == schema.pos_label)
      s.label = 1;
    else if (label_cell == schema.neg_label)
      s.label = -1;
    else
      throw Error(ErrorCode::schema,
                  "line " + std::to_string(line_no) + ": label '" +
                      label_cell + "' matches neither '" + schema.pos_label +
                      "' nor '" + schema.neg_label + "'");

    s.score = parse_double(cells[score_idx], line_no, schema.score_col);
    s.aux.reserve(aux_idx.size());
    for (std::size_t j = 0; j < aux_idx.size(); ++j)
      s.aux.push_back(
          parse_double(cells[aux_idx[j]], line_no, data.aux_names[j]));
    data.samples.push_back(std::move(s));
  }

  if (data.samples.empty())
    throw Error(ErrorCode::empty_input, "no data rows after the header");
  return data;
}

ScoredDataset read_dataset_file(const std::string& path,
                                const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  return parse_dataset(in, schema);
}

void write_dataset(std::ostream& out, const ScoredDataset& data) {
  out << "label,score";
  for (const auto& name : data.aux_names) out << ',' << name;
  out << '\n';
  char buf[64];
  for (const auto& s : data.samples) {
    out << (s.label > 0 ? "1" : "-1");
    std::snprintf(buf, sizeof(buf), "%.17g", s.score);
    out << ',' << buf;
    for (double v : s.aux) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "write failed");
}

void write_dataset_file(const std::string& path, const ScoredDataset& data) {
  std::ostringstream os;
  write_dataset(os, data);
  atomic_write_text(path, os.str());
}

std::vector<FoldPair> split_dataset(const ScoredDataset& data, int folds,
                                    std::uint64_t seed) {
  if (folds < 2)
    throw Error(ErrorCode::argument, "folds must be at least 2");
  if (static_cast<std::size_t>(folds) > data.size())
    throw Error(ErrorCode::argument,
                "folds (" + std::to_string(folds) +
                    ") exceeds dataset size (" + std::to_string(data.size()) +
                    ")");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.samples.size(); ++i)
    (data.samples[i].label > 0 ? pos : neg).push_back(i);

  std::mt19937_64 rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  // deal each class into `folds` contiguous chunks of near-equal size
  std::vector<int> fold_of(data.size(), 0);
  auto deal = [&](const std::vector<std::size_t>& idx) {
    std::size_t n = idx.size();
    std::size_t base = n / static_cast<std::size_t>(folds);
    std::size_t rem = n % static_cast<std::size_t>(folds);
    std::size_t at = 0;
    for (int f = 0; f < folds; ++f) {
      std::size_t take = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
      for (std::size_t j = 0; j < take; ++j) fold_of[idx[at++]] = f;
    }
  };
  deal(pos);
  deal(neg);

  std::vector<FoldPair> out(static_cast<std::size_t>(folds));
  for (auto& fp : out) {
    fp.train.aux_names = data.aux_names;
    fp.test.aux_names = data.aux_names;
  }
  // one pass per fold keeps original order in both halves
  for (int f = 0; f < folds; ++f) {
    auto& fp = out[static_cast<std::size_t>(f)];
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      if (fold_of[i] == f)
        fp.test.samples.push_back(data.samples[i]);
      else
        fp.train.samples.push_back(data.samples[i]);
    }
  }
  return out;
}

}  // namespace oer
