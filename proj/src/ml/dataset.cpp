// Copyright 2026 The dphealth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dphealth/ml/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace dphealth::ml {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(Trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(Trim(cell));
  return cells;
}

bool ParseDouble(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

void Shuffle(std::vector<Eigen::Index>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.UniformInt(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

void Dataset::Validate() const {
  Require(features.rows() == labels.size(), ErrorCode::kInvalidInput,
          "feature rows and label count differ");
  Require(feature_names.empty() ||
              static_cast<Eigen::Index>(feature_names.size()) == features.cols(),
          ErrorCode::kInvalidInput, "feature name count differs from columns");
  Require(((labels.array() == 0) || (labels.array() == 1)).all(),
          ErrorCode::kInvalidInput, "labels must be binary");
}

Eigen::Index Dataset::FeatureIndex(const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  Require(it != feature_names.end(), ErrorCode::kInvalidInput,
          "no feature named '" + name + "'");
  return static_cast<Eigen::Index>(it - feature_names.begin());
}

Dataset Dataset::Subset(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(r);
    out.labels(static_cast<Eigen::Index>(i)) = labels(r);
  }
  out.feature_names = feature_names;
  return out;
}

Dataset ParseCsv(const std::string& text, const CsvOptions& options) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitCsvLine(line);
      break;
    }
  }
  Require(!header.empty(), ErrorCode::kIngestError, "CSV has no header row");

  Eigen::Index label_col = -1;
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name == options.label_column) {
      label_col = static_cast<Eigen::Index>(c);
    } else if (std::find(options.excluded_columns.begin(),
                         options.excluded_columns.end(),
                         name) == options.excluded_columns.end()) {
      feature_cols.push_back(c);
      names.push_back(name);
    }
  }
  Require(label_col >= 0, ErrorCode::kIngestError,
          "label column '" + options.label_column + "' not in header");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = SplitCsvLine(line);
    Require(cells.size() == header.size(), ErrorCode::kIngestError,
            "line " + std::to_string(line_no) + ": expected " +
                std::to_string(header.size()) + " cells, got " +
                std::to_string(cells.size()));
    double label = 0;
    Require(ParseDouble(cells[static_cast<std::size_t>(label_col)], label) &&
                (label == 0.0 || label == 1.0),
            ErrorCode::kIngestError,
            "line " + std::to_string(line_no) + ": label must be 0 or 1");
    std::vector<double> row;
    row.reserve(feature_cols.size());
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      double v = 0;
      const auto& cell = cells[feature_cols[k]];
      Require(ParseDouble(cell, v), ErrorCode::kIngestError,
              "line " + std::to_string(line_no) + ", column '" + names[k] +
                  "': non-numeric value '" + cell + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
    labels.push_back(static_cast<int>(label));
  }
  Require(!rows.empty(), ErrorCode::kIngestError, "CSV has no data rows");

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(feature_cols.size()));
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
    data.labels(static_cast<Eigen::Index>(i)) = labels[i];
  }
  data.feature_names = std::move(names);
  return data;
}

Dataset ReadCsv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIngestError,
          "cannot open dataset '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCsv(buf.str(), options);
}

void WriteCsv(const Dataset& data, const std::string& label_column,
              const std::string& path) {
  data.Validate();
  std::ofstream out(path, std::ios::binary);
  Require(static_cast<bool>(out), ErrorCode::kIngestError,
          "cannot write '" + path + "'");
  out << std::setprecision(17);
  for (const auto& name : data.feature_names) out << name << ',';
  out << label_column << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) out << data.features(i, j) << ',';
    out << data.labels(i) << '\n';
  }
}

Dataset Preprocess(const Dataset& raw) {
  Require(raw.rows() > 0, ErrorCode::kInvalidInput, "empty dataset");
  Require(AllFinite(raw.features), ErrorCode::kIngestError,
          "dataset contains non-finite values");
  raw.Validate();
  Dataset out = raw;
  out.features = Standardize(raw.features);
  return out;
}

TrainTestSplit SplitAndBalance(const Dataset& data, const SplitSpec& spec) {
  data.Validate();
  Require(spec.test_fraction > 0.0 && spec.test_fraction < 1.0,
          ErrorCode::kInvalidParams, "test fraction must lie in (0, 1)");
  const Eigen::Index n = data.rows();
  std::array<std::vector<Eigen::Index>, 2> by_class;
  for (Eigen::Index i = 0; i < n; ++i) by_class[data.labels(i)].push_back(i);
  Require(!by_class[0].empty() && !by_class[1].empty(), ErrorCode::kSplitError,
          "both classes must be present");

  Rng rng(spec.seed);
  const auto n_test = static_cast<Eigen::Index>(
      std::ceil(spec.test_fraction * static_cast<double>(n) - 1e-9));
  std::vector<Eigen::Index> test;
  std::vector<Eigen::Index> train;
  if (spec.stratified) {
    // Largest-remainder allocation of the test quota across classes.
    std::array<Eigen::Index, 2> quota{};
    std::array<double, 2> remainder{};
    Eigen::Index assigned = 0;
    for (int c = 0; c < 2; ++c) {
      const double exact = static_cast<double>(n_test) *
                           static_cast<double>(by_class[c].size()) /
                           static_cast<double>(n);
      quota[c] = static_cast<Eigen::Index>(std::floor(exact));
      remainder[c] = exact - static_cast<double>(quota[c]);
      assigned += quota[c];
    }
    for (; assigned < n_test; ++assigned) {
      const int c = remainder[1] > remainder[0] ? 1 : 0;
      ++quota[c];
      remainder[c] = -1.0;
    }
    for (int c = 0; c < 2; ++c) {
      auto idx = by_class[c];
      Shuffle(idx, rng);
      const auto q = static_cast<std::size_t>(
          std::min<Eigen::Index>(quota[c], static_cast<Eigen::Index>(idx.size())));
      test.insert(test.end(), idx.begin(), idx.begin() + q);
      train.insert(train.end(), idx.begin() + q, idx.end());
    }
  } else {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    Shuffle(idx, rng);
    test.assign(idx.begin(), idx.begin() + n_test);
    train.assign(idx.begin() + n_test, idx.end());
  }

  if (spec.balance_train) {
    std::array<std::vector<Eigen::Index>, 2> train_by_class;
    for (auto i : train) train_by_class[data.labels(i)].push_back(i);
    const auto keep = std::min(train_by_class[0].size(), train_by_class[1].size());
    train.clear();
    for (int c = 0; c < 2; ++c) {
      auto& idx = train_by_class[c];
      std::sort(idx.begin(), idx.end());
      if (idx.size() > keep) Shuffle(idx, rng);
      train.insert(train.end(), idx.begin(), idx.begin() + keep);
    }
  }
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());

  TrainTestSplit out{data.Subset(train), data.Subset(test)};
  for (int c = 0; c < 2; ++c) {
    Require(out.train.CountLabel(c) > 0, ErrorCode::kSplitError,
            "class " + std::to_string(c) + " absent from the training split");
    Require(out.test.CountLabel(c) > 0, ErrorCode::kSplitError,
            "class " + std::to_string(c) + " absent from the test split");
  }
  return out;
}

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  Require(spec.rows > 1 && spec.positives > 0 && spec.positives < spec.rows,
          ErrorCode::kInvalidParams, "synthetic spec needs both classes");
  Rng rng(spec.seed);
  const std::vector<std::string> names = {
      "time",  "trt",    "age",    "wtkg",  "hemo",    "homo",
      "drugs", "karnof", "oprior", "z30",   "zprior",  "preanti",
      "race",  "gender", "str2",   "strat", "symptom", "treat",
      "offtrt", "cd40",  "cd420",  "cd80",  "cd820"};
  const auto n = spec.rows;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Shuffle(order, rng);
  LabelVector labels = LabelVector::Zero(n);
  for (Eigen::Index k = 0; k < spec.positives; ++k) labels(order[k]) = 1;

  FeatureMatrix x(n, static_cast<Eigen::Index>(names.size()));
  auto bern = [&](double p) { return rng.Bernoulli(p) ? 1.0 : 0.0; };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = labels(i);
    const double time = y > 0 ? rng.Normal(560.0, 300.0) : rng.Normal(930.0, 210.0);
    const double trt = static_cast<double>(rng.UniformInt(4));
    const double age = std::round(std::clamp(rng.Normal(35.0 + 1.5 * y, 8.7), 12.0, 70.0));
    const double wtkg = std::clamp(rng.Normal(75.0, 13.2), 31.0, 160.0);
    const double u = rng.Uniform();
    const double karnof = u < 0.52 - 0.12 * y ? 100.0
                          : u < 0.90          ? 90.0
                          : u < 0.97          ? 80.0
                                              : 70.0;
    const double preanti =
        rng.Bernoulli(0.42) ? 0.0
                            : std::round(-(550.0 + 150.0 * y) * std::log(rng.UniformOpen()));
    const double str2 = bern(0.56 + 0.1 * y);
    const double strat = str2 == 0.0 ? 1.0 : (rng.Bernoulli(0.45) ? 2.0 : 3.0);
    const double z_cd4 = rng.StandardNormal() - 0.55 * y;
    const double cd40 = std::max(0.0, 350.0 + 118.0 * z_cd4);
    const double cd420 = std::max(
        0.0, 370.0 + 145.0 * (0.40 * z_cd4 + 0.92 * rng.StandardNormal() - 0.6 * y));
    const double z_cd8 = rng.StandardNormal();
    const double cd80 = std::max(40.0, 987.0 + 480.0 * z_cd8);
    const double cd820 =
        std::max(120.0, 935.0 + 445.0 * (0.7 * z_cd8 + 0.71 * rng.StandardNormal()));
    const double row[] = {
        std::round(std::clamp(time, 14.0, 1231.0)),
        trt,
        age,
        wtkg,
        bern(0.084),
        bern(0.66),
        bern(0.13),
        karnof,
        bern(0.022),
        bern(0.52 + 0.15 * y),
        1.0,
        preanti,
        bern(0.29),
        bern(0.83),
        str2,
        strat,
        bern(0.15 + 0.1 * y),
        trt > 0.0 ? 1.0 : 0.0,
        bern(0.34 + 0.12 * y),
        std::round(cd40),
        std::round(cd420),
        std::round(cd80),
        std::round(cd820)};
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = row[j];
  }
  Dataset data{std::move(x), std::move(labels), names};
  data.Validate();
  return data;
}

}  // namespace dphealth::ml
