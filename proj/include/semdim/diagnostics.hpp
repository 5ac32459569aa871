#pragma once

#include <string>
#include <utility>
#include <vector>

namespace semdim {

struct Warning {
  std::string code;     // short machine-readable tag, e.g. "duplicate-word"
  std::string message;
  std::string context;  // file, run key, or similar
};

/// Append-only warning collector. Not synchronized: parallel workers each own
/// one and the results are merged in a fixed order.
class WarningLog {
 public:
  void add(std::string code, std::string message, std::string context = {}) {
    entries_.push_back({std::move(code), std::move(message), std::move(context)});
  }

  void merge(const WarningLog& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  }

  const std::vector<Warning>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Warning> entries_;
};

}  // namespace semdim
