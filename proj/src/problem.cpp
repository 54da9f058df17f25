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

#include "invstep/problem.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace invstep {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + why);
}

const json& require_field(const json& obj, const std::string& key,
                          const std::string& path) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path.empty() ? key : path + "." + key,
                                  "missing");
  return *it;
}

double to_number(const json& v, const std::string& path) {
  if (!v.is_number()) parse_fail(path, "expected a number");
  return v.get<double>();
}

Vector to_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    parse_fail(path, "expected a nonempty array of numbers");
  }
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) =
        to_number(v[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

// Row-major nested arrays. An empty array yields a 0 x 0 matrix when
// allowed (rays may be absent).
Matrix to_matrix(const json& v, const std::string& path,
                 bool allow_empty = false) {
  if (!v.is_array()) parse_fail(path, "expected an array of rows");
  if (v.empty()) {
    if (allow_empty) return Matrix(0, 0);
    parse_fail(path, "must not be empty");
  }
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) parse_fail(path + "[0]", "expected a nonempty row");
  Matrix out(static_cast<Eigen::Index>(v.size()),
             static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols) {
      parse_fail(row, "expected a row of length " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          to_number(v[i][j], row + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

// A list of points, returned as columns.
Matrix to_columns(const json& v, const std::string& path, int dim,
                  bool allow_empty) {
  Matrix rows = to_matrix(v, path, allow_empty);
  if (rows.size() == 0) return Matrix(dim > 0 ? dim : 0, 0);
  return rows.transpose();
}

std::size_t to_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    parse_fail(path, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

SetSpec parse_set(const json& s) {
  const json& type_field = require_field(s, "type", "set");
  if (!type_field.is_string()) parse_fail("set.type", "expected a string");
  const std::string type = type_field.get<std::string>();
  if (type == "ellipsoid") {
    return Ellipsoid{to_matrix(require_field(s, "Q", "set"), "set.Q")};
  }
  if (type == "h-polyhedron") {
    return HPolyhedron{to_matrix(require_field(s, "G", "set"), "set.G"),
                       to_vector(require_field(s, "b", "set"), "set.b")};
  }
  auto parse_v = [&]() {
    VPolyhedron v;
    v.vertices = to_columns(require_field(s, "vertices", "set"),
                            "set.vertices", 0, false);
    const auto it = s.find("rays");
    v.rays = it == s.end()
                 ? Matrix(v.vertices.rows(), 0)
                 : to_columns(*it, "set.rays",
                              static_cast<int>(v.vertices.rows()), true);
    return v;
  };
  if (type == "v-polyhedron") return parse_v();
  if (type == "polyhedron-pair") {
    HPolyhedron h{to_matrix(require_field(s, "G", "set"), "set.G"),
                  to_vector(require_field(s, "b", "set"), "set.b")};
    return PolyhedronPair{std::move(h), parse_v()};
  }
  if (type == "lorenz-cone") {
    const Matrix q = to_matrix(require_field(s, "Q", "set"), "set.Q");
    const auto it = s.find("axis");
    if (it == s.end()) {
      try {
        return LorenzCone::from_matrix(q);
      } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, e.what());
      }
    }
    return LorenzCone{q, to_vector(*it, "set.axis")};
  }
  if (type == "polyhedral-cone") {
    PolyhedralCone c;
    c.rays = to_columns(require_field(s, "rays", "set"), "set.rays", 0, false);
    c.normals = to_matrix(require_field(s, "normals", "set"), "set.normals");
    return c;
  }
  parse_fail("set.type", "unknown set type '" + type + "'");
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

std::optional<Method> parse_method(std::string_view name) {
  if (name == "forward-euler") return Method::ForwardEuler;
  if (name == "backward-euler") return Method::BackwardEuler;
  return std::nullopt;
}

bool is_builtin_example(std::string_view name) {
  return name == "example1" || name == "example2" || name == "example3";
}

ProblemSpec builtin_example(std::string_view name) {
  ProblemSpec p;
  p.example = std::string(name);
  if (name == "example1") {
    p.A = mat({{0, -1}, {1, 0}});
    p.set = Ellipsoid{Matrix::Identity(2, 2)};
  } else if (name == "example2") {
    p.A = mat({{1, -1, 0}, {1, 1, 0}, {0, 0, 1}});
    p.set = LorenzCone{Matrix(Eigen::Vector3d(1, 1, -1).asDiagonal()),
                       Eigen::Vector3d(0, 0, 1)};
  } else if (name == "example3") {
    p.A = mat({{3, -1}, {-1, 3}});
    p.set = LorenzCone{mat({{1, 0}, {0, -1}}), Eigen::Vector2d(0, 1)};
  } else {
    throw Error(ErrorKind::ParseError,
                "field 'system.example': unknown example '" +
                    std::string(name) + "'");
  }
  return p;
}

ProblemSpec parse_spec(const json& doc, double tol) {
  if (!doc.is_object()) parse_fail("<root>", "expected an object");
  const json& sys = require_field(doc, "system", "");
  ProblemSpec p;
  const bool has_a = sys.is_object() && sys.contains("A");
  const bool has_ex = sys.is_object() && sys.contains("example");
  if (has_a && has_ex) {
    parse_fail("system", "give either 'A' or 'example', not both");
  }
  if (has_ex) {
    const json& ex = sys["example"];
    if (!ex.is_string()) parse_fail("system.example", "expected a string");
    p = builtin_example(ex.get<std::string>());
    if (doc.contains("set")) p.set = parse_set(doc["set"]);
  } else {
    p.A = to_matrix(require_field(sys, "A", "system"), "system.A");
    p.set = parse_set(require_field(doc, "set", ""));
  }
  if (p.A.rows() != p.A.cols()) parse_fail("system.A", "must be square");
  if (!p.A.allFinite()) parse_fail("system.A", "entries must be finite");

  if (const auto it = doc.find("method"); it != doc.end()) {
    if (!it->is_string()) parse_fail("method", "expected a string");
    p.method = parse_method(it->get<std::string>());
    if (!p.method) {
      parse_fail("method", "expected 'forward-euler' or 'backward-euler'");
    }
  }
  if (const auto it = doc.find("point"); it != doc.end()) {
    p.point = to_vector(*it, "point");
  }
  if (const auto it = doc.find("dt"); it != doc.end()) {
    p.dt = to_number(*it, "dt");
    if (!(*p.dt >= 0.0) || !std::isfinite(*p.dt)) {
      parse_fail("dt", "must be finite and nonnegative");
    }
  }
  if (const auto it = doc.find("steps"); it != doc.end()) {
    p.steps = to_count(*it, "steps");
  }
  if (const auto it = doc.find("samples"); it != doc.end()) {
    p.samples = to_count(*it, "samples");
  }
  if (const auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() &&
                                       it->get<long long>() >= 0)) {
      parse_fail("seed", "expected a nonnegative integer");
    }
    p.seed = it->get<std::uint64_t>();
  }

  require_valid(p.set, tol);
  const int n = dimension(p.set);
  if (p.A.rows() != n) {
    throw Error(ErrorKind::ValidationError,
                "system dimension " + std::to_string(p.A.rows()) +
                    " differs from set dimension " + std::to_string(n));
  }
  if (p.point && p.point->size() != n) {
    throw Error(ErrorKind::ValidationError,
                "point has dimension " + std::to_string(p.point->size()) +
                    ", expected " + std::to_string(n));
  }
  return p;
}

ProblemSpec parse_spec_text(std::string_view text, double tol) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min(e.byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < at; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) +
                                           ", column " + std::to_string(col) +
                                           ": malformed JSON");
  }
  return parse_spec(doc, tol);
}

ProblemSpec load_spec(const std::string& path, double tol) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return parse_spec_text(text, tol);
}

}  // namespace invstep
