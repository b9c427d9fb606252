#pragma once

#include <string>
#include <vector>

#include "mathcast/case_analyzer.hpp"
#include "mathcast/registry.hpp"

namespace mathcast::testing {

inline const MacroRegistry& registry() {
  static const MacroRegistry reg = load_registry(MATHCAST_SOURCE_DIR "/data/registry.txt");
  return reg;
}

inline std::string fixtures_path() { return MATHCAST_SOURCE_DIR "/data/fixtures.jsonl"; }

inline const std::vector<CorpusLine>& fixtures() {
  static const std::vector<CorpusLine> lines = load_corpus(fixtures_path());
  return lines;
}

inline const CorpusLine& fixture(const std::string& id) {
  for (const CorpusLine& l : fixtures()) {
    if (l.id == id) return l;
  }
  throw std::runtime_error("no fixture " + id);
}

}  // namespace mathcast::testing
