#include "caplab/report.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace caplab {

void VerificationReport::add(CheckResult r) { entries_.push_back(std::move(r)); }

void VerificationReport::add_residual(const std::string& name, double residual, double tol,
                                      const std::string& where, const std::string& note) {
  CheckResult r;
  r.name = name;
  r.value = residual;
  r.tolerance = tol;
  r.pass = std::isfinite(residual) && residual <= tol;
  r.worst_location = where;
  r.note = note;
  entries_.push_back(std::move(r));
}

void VerificationReport::add_margin(const std::string& name, double margin, double tol,
                                    const std::string& where, const std::string& note) {
  CheckResult r;
  r.name = name;
  r.value = margin;
  r.tolerance = tol;
  r.pass = std::isfinite(margin) && margin >= -tol;
  r.worst_location = where;
  r.note = note;
  entries_.push_back(std::move(r));
}

bool VerificationReport::all_pass() const {
  for (const auto& e : entries_)
    if (!e.pass) return false;
  return true;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& e : other.entries_) entries_.push_back(e);
}

std::string VerificationReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j;
    j["check"] = e.name;
    j["residual"] = e.value;
    j["tolerance"] = e.tolerance;
    j["pass"] = e.pass;
    j["worst_location"] = e.worst_location;
    if (!e.note.empty()) j["note"] = e.note;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  for (const auto& e : entries_) {
    os << (e.pass ? "PASS " : "FAIL ") << e.name << "  value=" << e.value
       << "  tol=" << e.tolerance;
    if (!e.worst_location.empty()) os << "  at " << e.worst_location;
    if (!e.note.empty()) os << "  [" << e.note << "]";
    os << "\n";
  }
  return os.str();
}

}  // namespace caplab
