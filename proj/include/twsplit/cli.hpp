#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twsplit {

// Command-line driver. args holds the arguments in natural order, without
// the program name; out and err receive what would normally go to stdout
// and stderr, so the whole CLI can be exercised in-process.
//
// Subcommands:
//   decompose --k K -i g.gr -o g.td [--telemetry rounds.jsonl]
//       exit 0 and write a decomposition of width <= 2K+1, or exit 2 and
//       print "tw > K" when the split search certifies the width bound.
//   validate -i g.gr -t g.td [--k K]
//       exit 0 iff the decomposition is valid for the graph (and of width
//       <= 2K+1 when --k is given); exit 1 printing the first violation.
//   exact -i g.gr
//       print the exact treewidth (graphs up to 20 vertices).
//   bench --family F --k K --sizes n1,n2,... [--seed S] [--keep P]
//       generate one instance per size, run the decision procedure and
//       emit CSV: n,width_out,rounds,dp_recomputes,phi_start,wall_ms.
//   stats -i g.gr --k K [--histogram h.csv]
//       run the decision procedure with telemetry and print one JSON object
//       per round.
//
// Exit codes: 0 success, 1 invalid decomposition (validate), 2 certified
// width above K (decompose/stats), 64 usage error, 65 unreadable or
// malformed input, 70 broken internal invariant.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace twsplit
