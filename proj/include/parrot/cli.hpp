#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "parrot/store.hpp"

namespace parrot {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitPartial = 3,
};

inline constexpr const char* kDataDirEnv = "PARROT_DATA";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Snapshot plan: one cumulative group per line, "label<TAB>prefix[,prefix…]".
// A document joins the first group whose prefix starts its name.
struct SnapshotGroup {
  std::string label;
  std::vector<std::string> prefixes;
};

std::vector<SnapshotGroup> parse_snapshot_plan(std::istream& in);
std::vector<std::vector<DocumentId>> resolve_snapshot_plan(const Repository& repo,
                                                           const std::vector<SnapshotGroup>& plan);

}  // namespace parrot
