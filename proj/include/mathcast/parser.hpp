#pragma once

#include <string_view>
#include <vector>

#include "mathcast/math_node.hpp"
#include "mathcast/token.hpp"

namespace mathcast {

class MacroRegistry;

struct ParseOptions {
  // Accept `$k` placeholders (registry templates).
  bool allow_placeholders = false;
};

MathNode parse(const std::vector<Token>& tokens, const MacroRegistry& registry,
               ParseOptions options = {});

// tokenize + parse.
MathNode parse_latex(std::string_view source, const MacroRegistry& registry,
                     ParseOptions options = {});

}  // namespace mathcast
