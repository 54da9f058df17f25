/*
 Copyright 2026 The invstep Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "invstep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace invstep {

namespace {

std::string format_double(double v) {
  // "-0" would be read back as the integer 0.
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostringstream& os, const Report& r, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (r.type()) {
    case Report::value_t::object: {
      if (r.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = r.begin(); it != r.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Report(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Report::value_t::array: {
      if (r.empty()) {
        os << "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      bool flat = true;
      for (const auto& e : r) flat = flat && e.is_primitive();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (i) os << ", ";
          write_json(os, r[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write_json(os, r[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Report::value_t::number_float:
      os << format_double(r.get<double>());
      return;
    default:
      os << r.dump();
      return;
  }
}

void write_text(std::ostringstream& os, const Report& r, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (auto it = r.begin(); it != r.end(); ++it) {
    const Report& v = it.value();
    const std::string key = r.is_object() ? it.key() : "-";
    const bool nested =
        v.is_structured() &&
        !(v.is_array() && std::all_of(v.begin(), v.end(), [](const Report& e) {
            return e.is_primitive();
          }));
    if (nested) {
      os << pad << key << ":\n";
      write_text(os, v, indent + 1);
    } else if (v.is_string()) {
      os << pad << key << ": " << v.get<std::string>() << "\n";
    } else {
      std::ostringstream tmp;
      write_json(tmp, v, 0);
      os << pad << key << ": " << tmp.str() << "\n";
    }
  }
}

}  // namespace

Report number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const Report& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::ParseError, "expected a number, got " + v.dump());
}

Report to_json(const Vector& v) {
  Report out = Report::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Report to_json(const Matrix& m) {
  Report out = Report::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.push_back(to_json(Vector(m.row(i).transpose())));
  }
  return out;
}

Report to_json(const Verdict& v, double tol) {
  Report out;
  out["outcome"] = std::string(to_string(v.outcome));
  out["margin"] = number(v.margin);
  out["tolerance"] = number(tol);
  out["basis"] = v.certificate;
  out["witness"] = v.witness ? to_json(*v.witness) : Report();
  if (v.multiplier) out["multiplier"] = number(*v.multiplier);
  if (v.samples > 0) out["samples"] = v.samples;
  return out;
}

Report to_json(const ThresholdReport& t, double tol) {
  Report out;
  out["kind"] = std::string(to_string(t.kind));
  out["value"] = number(t.value);
  out["inclusive"] = t.inclusive;
  out["basis"] = t.basis;
  out["norm"] = t.norm;
  out["tolerance"] = number(tol);
  out["tags"] = t.tags;
  Report diag = Report::object();
  for (const auto& [k, v] : t.diagnostics) diag[k] = number(v);
  out["diagnostics"] = diag;
  return out;
}

Report to_json(const oracle::SampleReport& r, double tol) {
  Report out;
  out["samples"] = r.samples;
  out["seed"] = r.seed;
  out["violations"] = r.violations;
  out["max_excursion"] = number(r.max_excursion);
  out["min_image_margin"] = number(r.min_image_margin);
  out["tolerance"] = number(tol);
  out["basis"] = "sampled check, not a certificate";
  Report wit = Report::array();
  for (const auto& w : r.witnesses) {
    Report e;
    e["x"] = to_json(w.x);
    e["image"] = to_json(w.image);
    e["image_margin"] = number(w.image_margin);
    wit.push_back(e);
  }
  out["witnesses"] = wit;
  return out;
}

Report to_json(const ValidationReport& r) {
  Report out;
  out["passed"] = r.passed();
  Report fails = Report::array();
  for (const auto& f : r.failures) {
    Report e;
    e["invariant"] = f.invariant;
    e["margin"] = number(f.margin);
    fails.push_back(e);
  }
  out["failures"] = fails;
  if (r.inertia) {
    out["inertia"] = {r.inertia->n_plus, r.inertia->n_zero, r.inertia->n_minus};
  }
  if (r.interior_point) out["interior_point"] = to_json(*r.interior_point);
  return out;
}

std::string emit_json(const Report& r) {
  std::ostringstream os;
  write_json(os, r, 0);
  os << "\n";
  return os.str();
}

std::string emit_text(const Report& r) {
  std::ostringstream os;
  if (r.is_structured()) {
    write_text(os, r, 0);
  } else {
    write_json(os, r, 0);
    os << "\n";
  }
  return os.str();
}

}  // namespace invstep
