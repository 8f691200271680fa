#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cogme {

// Rooted directed acyclic graph of lemmas with child -> parent links.
// depth(root) == 1; every other node's depth is one more than the length of
// its shortest parent path to the root.
class Taxonomy {
 public:
  using Edge = std::pair<std::string, std::string>;  // (child, parent)

  // Builds and checks the graph. Without an explicit root, the root is the
  // unique node that never appears as a child. Throws TaxonomyError on a
  // cycle ("cycle ..."), a parent that is neither a child nor the root
  // ("orphan parent ..."), or an empty edge list.
  static Taxonomy from_edges(const std::vector<Edge>& edges,
                             std::optional<std::string> root = std::nullopt);

  const std::string& root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(std::string_view lemma) const;

  // Throws std::out_of_range for unknown lemmas.
  int depth(std::string_view lemma) const;
  const std::vector<std::string>& parents(std::string_view lemma) const;
  // The lemma itself and everything reachable through parent links.
  std::set<std::string> ancestors_of(std::string_view lemma) const;

  // Sorted node list.
  std::vector<std::string> nodes() const;

 private:
  struct Node {
    std::vector<std::string> parents;
    int depth = 0;
  };
  const Node& node(std::string_view lemma) const;

  std::string root_;
  std::unordered_map<std::string, Node> nodes_;
};

}  // namespace cogme
