#pragma once

#include <string>
#include <vector>

#include "parrot/metrics.hpp"

namespace parrot::testing {

// Returns one message per violated identity; empty when all hold.
std::vector<std::string> metric_identity_violations(const CorpusMetrics& m);

// Sentence-count fields must not decrease when a document is added.
std::vector<std::string> growth_violations(const CorpusMetrics& before, const CorpusMetrics& after);

}  // namespace parrot::testing
