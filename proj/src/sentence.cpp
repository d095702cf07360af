#include "coexpand/sentence.hpp"

#include "coexpand/text.hpp"

namespace coexpand {

std::vector<Sentence> split_sentences(const Document& doc) {
  std::vector<Sentence> out;
  std::string_view text = doc.text;
  auto emit = [&](std::size_t begin, std::size_t end) {
    auto piece = text::trim(text.substr(begin, end - begin));
    if (piece.empty()) return;
    std::size_t idx = out.size();
    out.push_back({doc.doc_id, idx, doc.doc_id + "#" + std::to_string(idx), std::string(piece)});
  };

  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') {
      emit(begin, i);
      begin = i + 1;
    } else if ((c == '.' || c == '?' || c == '!') && i + 1 < text.size() &&
               text::is_space(static_cast<unsigned char>(text[i + 1]))) {
      emit(begin, i + 1);
      begin = i + 1;
    }
  }
  emit(begin, text.size());
  return out;
}

}  // namespace coexpand
