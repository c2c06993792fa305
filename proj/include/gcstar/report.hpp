#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace gcstar {

struct Check {
  std::string name;
  bool pass = true;
  double max_defect = 0.0;
  std::string witness;
  double seconds = 0.0;
};

struct Report {
  std::vector<Check> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  Check& add(std::string name, bool pass, double defect = 0.0, std::string witness = {}) {
    checks.push_back({std::move(name), pass, defect, std::move(witness), 0.0});
    return checks.back();
  }
  // Passes iff defect <= tol.
  Check& bound(std::string name, double defect, double tol, std::string witness = {}) {
    return add(std::move(name), defect <= tol, defect, std::move(witness));
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  void merge(const Report& other, const std::string& prefix = {}) {
    for (auto c : other.checks) {
      c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
  }
  void sort() {
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace gcstar
