#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace coexpand {

// Aho-Corasick automaton over bytes. Reports every occurrence of every
// pattern, including overlapping and nested ones. Build with add() then
// compile(); afterwards the matcher is immutable and safe to share.
class PatternMatcher {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  PatternMatcher();

  // Returns the pattern index. Empty patterns are rejected.
  std::uint32_t add(std::string_view pattern);
  void compile();

  std::size_t pattern_count() const { return lengths_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  // on_match(pattern_index, begin_byte, end_byte) for every hit, in order of
  // end position; hits sharing an end come longest first.
  template <class OnMatch>
  void scan(std::string_view text, OnMatch&& on_match) const {
    std::uint32_t state = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      state = step(state, static_cast<unsigned char>(text[i]));
      for (std::uint32_t n = nodes_[state].output != kNone ? state : nodes_[state].dict_link;
           n != kNone; n = nodes_[n].dict_link) {
        std::uint32_t p = nodes_[n].output;
        std::size_t end = i + 1;
        on_match(p, end - lengths_[p], end);
      }
    }
  }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::uint32_t>> children;  // sorted by byte
    std::uint32_t fail = 0;
    std::uint32_t output = kNone;     // pattern ending exactly here
    std::uint32_t dict_link = kNone;  // nearest proper suffix node with an output
  };

  std::uint32_t child(std::uint32_t node, unsigned char c) const;
  std::uint32_t step(std::uint32_t state, unsigned char c) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> lengths_;
  std::array<std::uint32_t, 256> root_next_{};
  bool compiled_ = false;
};

}  // namespace coexpand
