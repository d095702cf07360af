#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coexpand/corpus_io.hpp"

namespace coexpand {

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;    // position within the document, from 0
  std::string sentence_id;  // "<doc_id>#<index>"
  std::string text;         // trimmed, non-empty
};

// Breaks at '\n' and after '.', '?' or '!' followed by whitespace. Pieces are
// trimmed and empty ones dropped. Not a linguistic segmenter: "e.g. x" splits.
std::vector<Sentence> split_sentences(const Document& doc);

}  // namespace coexpand
