#pragma once

#include <string>
#include <vector>

#include "pathforge/ast.hpp"
#include "pathforge/diagnostics.hpp"

namespace pathforge {

// Parse one source file written in the supported subset.
// Throws ParseError (code "syntax-error" or "unsupported-construct").
SourceUnit parse_unit(const std::string& source, const std::string& path);

// Re-checks subset invariants on a parsed tree. The parser already rejects
// out-of-subset syntax; this catches trees built programmatically.
std::vector<Diagnostic> validate_subset(const SourceUnit& unit);

}  // namespace pathforge
