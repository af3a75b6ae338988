#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace hlskit {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);  // keep the smallest index as root
    parent_[b] = a;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }

  /// Root index of each element, plus a dense renumbering of the roots in
  /// first-appearance order.
  std::vector<std::size_t> component_ids() {
    std::vector<std::size_t> id(parent_.size(), SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      std::size_t r = find(i);
      if (id[r] == SIZE_MAX) id[r] = next++;
      id[i] = id[r];
    }
    return id;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace hlskit
