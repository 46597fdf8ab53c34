#pragma once

#include <vector>

#include "xclass/classifier.hpp"

namespace xclass {

// Batch scoring over a read-only snapshot. The serial versions are the
// reference the OpenMP versions are tested against.
std::vector<Prediction> predict_batch_serial(const Scorer& scorer, const std::vector<Vec>& rows);
std::vector<Prediction> predict_batch_parallel(const Scorer& scorer, const std::vector<Vec>& rows, int threads = 0);

// Max confidence over all classes in the full feature space.
std::vector<double> confidence_batch_serial(const Scorer& scorer, const std::vector<Vec>& rows);
std::vector<double> confidence_batch_parallel(const Scorer& scorer, const std::vector<Vec>& rows, int threads = 0);

int max_threads();

}  // namespace xclass
