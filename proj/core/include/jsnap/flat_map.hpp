#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace jsnap {

// Sorted-vector map. The models here hold a handful of keys, and keys are
// almost always appended in increasing order.
template <typename K, typename V>
class FlatMap {
 public:
  using value_type = std::pair<K, V>;
  using const_iterator = typename std::vector<value_type>::const_iterator;
  using iterator = typename std::vector<value_type>::iterator;

  FlatMap() = default;
  FlatMap(std::initializer_list<value_type> init) {
    for (const auto& kv : init) insert_or_assign(kv.first, kv.second);
  }

  // Returns false (and leaves the map untouched) if the key is present.
  bool insert(const K& key, V value) {
    auto it = lower(key);
    if (it != items_.end() && it->first == key) return false;
    items_.emplace(it, key, std::move(value));
    return true;
  }

  void insert_or_assign(const K& key, V value) {
    auto it = lower(key);
    if (it != items_.end() && it->first == key) {
      it->second = std::move(value);
    } else {
      items_.emplace(it, key, std::move(value));
    }
  }

  bool erase(const K& key) {
    auto it = lower(key);
    if (it == items_.end() || it->first != key) return false;
    items_.erase(it);
    return true;
  }

  const V* find(const K& key) const {
    auto it = std::lower_bound(
        items_.begin(), items_.end(), key,
        [](const value_type& kv, const K& k) { return kv.first < k; });
    if (it == items_.end() || it->first != key) return nullptr;
    return &it->second;
  }

  V* find(const K& key) {
    auto it = lower(key);
    if (it == items_.end() || it->first != key) return nullptr;
    return &it->second;
  }

  bool contains(const K& key) const { return find(key) != nullptr; }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }

  const value_type& back() const { return items_.back(); }

  bool operator==(const FlatMap&) const = default;

 private:
  iterator lower(const K& key) {
    return std::lower_bound(
        items_.begin(), items_.end(), key,
        [](const value_type& kv, const K& k) { return kv.first < k; });
  }

  std::vector<value_type> items_;
};

}  // namespace jsnap
