#pragma once

// Umbrella header: MDL rule lists for multiclass classification.

#include "data.hpp"      // CSV loading, one-hot binarization, folds
#include "encoding.hpp"  // universal / plug-in code lengths
#include "errors.hpp"
#include "ids.hpp"
#include "metrics.hpp"   // accuracy, AUC, evaluation, cross-validation
#include "mining.hpp"    // candidate pattern mining
#include "parallel.hpp"
#include "rulelist.hpp"  // rule lists, covers, prediction, serialization
#include "search.hpp"    // greedy MDL fitting

namespace classy {
inline constexpr const char* version = "1.0.0";
}
