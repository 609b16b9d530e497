#pragma once

#include <numeric>
#include <vector>

namespace quermass {

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> rank_;

  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)]) ++rank_[static_cast<std::size_t>(a)];
    return true;
  }

  /// Renumbers roots to 0..k-1 in order of smallest member index; fills labels.
  int compact_labels(std::vector<int>& labels) {
    const int n = static_cast<int>(parent.size());
    labels.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> root_label(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
      const int r = find(i);
      if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
      labels[static_cast<std::size_t>(i)] = root_label[static_cast<std::size_t>(r)];
    }
    return next;
  }
};

}  // namespace quermass
