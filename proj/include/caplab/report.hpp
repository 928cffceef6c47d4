#pragma once

#include <optional>
#include <string>
#include <vector>

namespace caplab {

// One named check: a residual (or inequality margin) against a tolerance.
// For inequality checks `value` is the signed margin, negative means violated.
struct CheckResult {
  std::string name;
  double value = 0.0;      // residual magnitude or margin
  double tolerance = 0.0;  // pass when residual <= tol (or margin >= -tol)
  bool pass = false;
  std::string worst_location;  // where the worst violation / extremum sits
  std::string note;            // free-form flags (e.g. "rigidity-clause-triggered")
};

class VerificationReport {
 public:
  void add(CheckResult r);
  // residual-style: pass when value <= tolerance
  void add_residual(const std::string& name, double residual, double tol,
                    const std::string& where = "", const std::string& note = "");
  // margin-style: pass when margin >= -tolerance
  void add_margin(const std::string& name, double margin, double tol,
                  const std::string& where = "", const std::string& note = "");

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
  const std::vector<CheckResult>& entries() const { return entries_; }

  void merge(const VerificationReport& other);

  std::string to_json() const;  // deterministic, sorted by insertion order
  std::string summary() const;  // one line per check, human readable

 private:
  std::vector<CheckResult> entries_;
};

}  // namespace caplab
