#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "roomrec/errors.hpp"

namespace roomrec {

// Bijection between string ids and dense indices [0, size).
class StringInterner {
 public:
  StringInterner() = default;

  std::size_t intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const std::size_t id = names_.size();
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }

  std::size_t at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw IntegrityError("unknown identifier: '" + name + "'");
    }
    return it->second;
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  const std::string& name(std::size_t id) const { return names_.at(id); }

  std::size_t size() const { return names_.size(); }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace roomrec
