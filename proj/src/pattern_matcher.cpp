#include "coexpand/pattern_matcher.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace coexpand {

PatternMatcher::PatternMatcher() : nodes_(1) {}

std::uint32_t PatternMatcher::child(std::uint32_t node, unsigned char c) const {
  const auto& ch = nodes_[node].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), c,
                             [](const auto& edge, unsigned char b) { return edge.first < b; });
  return (it != ch.end() && it->first == c) ? it->second : kNone;
}

std::uint32_t PatternMatcher::step(std::uint32_t state, unsigned char c) const {
  while (state != 0) {
    std::uint32_t next = child(state, c);
    if (next != kNone) return next;
    state = nodes_[state].fail;
  }
  return root_next_[c];
}

std::uint32_t PatternMatcher::add(std::string_view pattern) {
  if (compiled_) throw std::logic_error("PatternMatcher::add after compile");
  if (pattern.empty()) throw std::invalid_argument("empty pattern");
  std::uint32_t node = 0;
  for (unsigned char c : pattern) {
    std::uint32_t next = child(node, c);
    if (next == kNone) {
      next = static_cast<std::uint32_t>(nodes_.size());
      auto& ch = nodes_[node].children;
      auto it = std::lower_bound(ch.begin(), ch.end(), c,
                                 [](const auto& edge, unsigned char b) { return edge.first < b; });
      ch.insert(it, {c, next});
      nodes_.emplace_back();
    }
    node = next;
  }
  auto index = static_cast<std::uint32_t>(lengths_.size());
  if (nodes_[node].output != kNone) throw std::invalid_argument("duplicate pattern");
  nodes_[node].output = index;
  lengths_.push_back(static_cast<std::uint32_t>(pattern.size()));
  return index;
}

void PatternMatcher::compile() {
  if (compiled_) return;
  root_next_.fill(0);
  for (auto [c, n] : nodes_[0].children) root_next_[c] = n;

  std::queue<std::uint32_t> queue;
  for (auto [c, n] : nodes_[0].children) {
    nodes_[n].fail = 0;
    queue.push(n);
  }
  while (!queue.empty()) {
    std::uint32_t node = queue.front();
    queue.pop();
    for (auto [c, n] : nodes_[node].children) {
      std::uint32_t f = step(nodes_[node].fail, c);
      nodes_[n].fail = f;
      nodes_[n].dict_link = nodes_[f].output != kNone ? f : nodes_[f].dict_link;
      queue.push(n);
    }
  }
  compiled_ = true;
}

}  // namespace coexpand
