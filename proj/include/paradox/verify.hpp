#pragma once

#include "paradox/paradox.hpp"
#include "paradox/report.hpp"

namespace paradox {

// Solver-free replay of certificates. These use only group arithmetic and
// set membership; none of them touches the matching or flow code.

ValidationReport verify_match(const MatchCert& c, int slack = 4);
ValidationReport verify_deficiency(const DeficiencyCert& c, int slack = 4);
ValidationReport verify_flow(const FlowCert& c, int slack = 4);
ValidationReport verify_flow_deficiency(const FlowDeficiency& c, int slack = 4);

}  // namespace paradox
