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

#ifndef DPHEALTH_ML_DATASET_HPP_
#define DPHEALTH_ML_DATASET_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

// Numeric feature table with binary labels.
struct Dataset {
  FeatureMatrix features;
  LabelVector labels;
  std::vector<std::string> feature_names;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }

  // Throws kInvalidInput unless rows(features) == size(labels), labels are
  // in {0, 1} and names (when given) match the column count.
  void Validate() const;

  Eigen::Index CountLabel(int label) const {
    return (labels.array() == label).count();
  }

  Eigen::Index FeatureIndex(const std::string& name) const;

  Dataset Subset(const std::vector<Eigen::Index>& rows) const;
};

struct CsvOptions {
  std::string label_column = "cid";
  std::vector<std::string> excluded_columns = {"pidnum"};
};

// Reads a header-first CSV. The label column must be 0/1; every other
// non-excluded column must parse as a number (kIngestError otherwise).
Dataset ReadCsv(const std::string& path, const CsvOptions& options);
Dataset ParseCsv(const std::string& text, const CsvOptions& options);

void WriteCsv(const Dataset& data, const std::string& label_column,
              const std::string& path);

// Standardizes each column to mean 0 and sample standard deviation 1.
// Constant columns become all zeros.
template <typename Derived>
MatrixX<typename Derived::Scalar> Standardize(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> out(m.rows(), m.cols());
  const auto n = m.rows();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Scalar mean = m.col(j).mean();
    const auto centered = (m.col(j).array() - mean).matrix().eval();
    const Scalar ss = centered.squaredNorm();
    const Scalar sd = n > 1 ? std::sqrt(ss / Scalar(n - 1)) : Scalar(0);
    if (sd > Scalar(0)) {
      out.col(j) = centered / sd;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

// Feature standardization; labels untouched.
Dataset Preprocess(const Dataset& raw);

struct SplitSpec {
  double test_fraction = 0.2;
  bool stratified = true;
  bool balance_train = true;
  std::uint64_t seed = 0;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Stratified hold-out split first, then undersampling of the training part
// to equal class counts. Rows keep their original relative order.
TrainTestSplit SplitAndBalance(const Dataset& data, const SplitSpec& spec);

struct SyntheticSpec {
  Eigen::Index rows = 2139;
  Eigen::Index positives = 521;
  std::uint64_t seed = 175;
};

// Raw (unstandardized) table shaped like the AIDS Clinical Trials Group
// Study 175 extract: the same 23 clinical feature columns, 2139 rows and 521
// positives by default. Class-conditional distributions are hand-set so that
// the usual learners separate the classes to a similar degree.
Dataset GenerateSynthetic(const SyntheticSpec& spec = {});

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_DATASET_HPP_
