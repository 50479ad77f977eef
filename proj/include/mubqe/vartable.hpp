// Variable identities. A VarId is an index into a VarTable, which owns the
// display names. Polynomials and formulas refer to variables only by index.
#ifndef MUBQE_VARTABLE_HPP
#define MUBQE_VARTABLE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mubqe {

struct VarId {
  std::uint32_t index = 0;

  friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
  friend bool operator!=(VarId a, VarId b) { return a.index != b.index; }
  friend bool operator<(VarId a, VarId b) { return a.index < b.index; }
  friend bool operator>(VarId a, VarId b) { return a.index > b.index; }
};

class VarTable {
 public:
  // Returns the existing id for `name` or registers a new one.
  VarId intern(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return VarId{it->second};
    std::uint32_t idx = static_cast<std::uint32_t>(names_.size());
    names_.push_back(name);
    by_name_.emplace(name, idx);
    return VarId{idx};
  }

  bool contains(const std::string& name) const { return by_name_.count(name) > 0; }

  VarId id_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::out_of_range("unknown variable: " + name);
    return VarId{it->second};
  }

  const std::string& name_of(VarId v) const {
    if (v.index >= names_.size()) throw std::out_of_range("variable id out of range");
    return names_[v.index];
  }

  std::size_t size() const { return names_.size(); }

  // Fresh variable with a name derived from `base` that is not yet taken.
  VarId fresh(const std::string& base) {
    if (!contains(base)) return intern(base);
    for (int i = 1;; ++i) {
      std::string cand = base + "_" + std::to_string(i);
      if (!contains(cand)) return intern(cand);
    }
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> by_name_;
};

}  // namespace mubqe

#endif
