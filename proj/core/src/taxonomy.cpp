#include "cogme/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "cogme/errors.hpp"

namespace cogme {

Taxonomy Taxonomy::from_edges(const std::vector<Edge>& edges,
                              std::optional<std::string> root) {
  if (edges.empty() && !root) throw TaxonomyError("empty taxonomy");

  Taxonomy t;
  std::set<std::string> children;
  for (const auto& [child, parent] : edges) {
    if (child == parent) {
      throw TaxonomyError("cycle: self-edge '" + child + "' -> '" + parent + "'");
    }
    auto& parents = t.nodes_[child].parents;
    if (std::find(parents.begin(), parents.end(), parent) == parents.end()) {
      parents.push_back(parent);
    }
    t.nodes_.try_emplace(parent);
    children.insert(child);
  }
  for (auto& [name, n] : t.nodes_) std::sort(n.parents.begin(), n.parents.end());

  std::vector<std::string> roots;
  for (const auto& [name, n] : t.nodes_) {
    if (!children.contains(name)) roots.push_back(name);
  }
  std::sort(roots.begin(), roots.end());

  if (root) {
    if (children.contains(*root)) {
      throw TaxonomyError("root '" + *root + "' has a parent");
    }
    t.nodes_.try_emplace(*root);
    for (const auto& r : roots) {
      if (r != *root) throw TaxonomyError("orphan parent '" + r + "'");
    }
    t.root_ = *root;
  } else if (roots.size() == 1) {
    t.root_ = roots.front();
  } else if (roots.empty()) {
    throw TaxonomyError("cycle: every node has a parent, no root");
  } else {
    std::string list;
    for (const auto& r : roots) list += (list.empty() ? "" : ", ") + ("'" + r + "'");
    throw TaxonomyError("orphan parent: several nodes never appear as a child (" +
                        list + ")");
  }

  // Cycle check by iterative DFS over parent links.
  std::map<std::string, int> state;  // 1 = on stack, 2 = done
  for (const auto& [start, unused] : t.nodes_) {
    if (state[start] == 2) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [name, next] = stack.back();
      const auto& parents = t.nodes_.at(name).parents;
      if (next == parents.size()) {
        state[name] = 2;
        stack.pop_back();
        continue;
      }
      const std::string parent = parents[next++];
      const int s = state[parent];
      if (s == 1) throw TaxonomyError("cycle through '" + parent + "'");
      if (s == 0) {
        state[parent] = 1;
        stack.emplace_back(parent, 0);
      }
    }
  }

  // Shortest-path depths by BFS from the root down child links.
  std::unordered_map<std::string, std::vector<std::string>> child_links;
  for (const auto& [name, n] : t.nodes_) {
    for (const auto& p : n.parents) child_links[p].push_back(name);
  }
  std::deque<std::string> queue{t.root_};
  t.nodes_.at(t.root_).depth = 1;
  while (!queue.empty()) {
    const std::string current = queue.front();
    queue.pop_front();
    const int d = t.nodes_.at(current).depth;
    for (const auto& c : child_links[current]) {
      auto& n = t.nodes_.at(c);
      if (n.depth == 0) {
        n.depth = d + 1;
        queue.push_back(c);
      }
    }
  }
  for (const auto& [name, n] : t.nodes_) {
    if (n.depth == 0) throw TaxonomyError("node '" + name + "' does not reach the root");
  }
  return t;
}

bool Taxonomy::contains(std::string_view lemma) const {
  return nodes_.find(std::string(lemma)) != nodes_.end();
}

const Taxonomy::Node& Taxonomy::node(std::string_view lemma) const {
  auto it = nodes_.find(std::string(lemma));
  if (it == nodes_.end()) {
    throw std::out_of_range("lemma not in taxonomy: '" + std::string(lemma) + "'");
  }
  return it->second;
}

int Taxonomy::depth(std::string_view lemma) const { return node(lemma).depth; }

const std::vector<std::string>& Taxonomy::parents(std::string_view lemma) const {
  return node(lemma).parents;
}

std::set<std::string> Taxonomy::ancestors_of(std::string_view lemma) const {
  std::set<std::string> seen{std::string(lemma)};
  std::vector<std::string> pending{std::string(lemma)};
  node(lemma);
  while (!pending.empty()) {
    const std::string current = std::move(pending.back());
    pending.pop_back();
    for (const auto& p : node(current).parents) {
      if (seen.insert(p).second) pending.push_back(p);
    }
  }
  return seen;
}

std::vector<std::string> Taxonomy::nodes() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [name, n] : nodes_) out.push_back(name);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cogme
