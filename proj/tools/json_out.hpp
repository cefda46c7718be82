/*
 * Copyright 2026 The lsqcond Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LSQCOND_TOOLS_JSON_OUT_HPP_
#define LSQCOND_TOOLS_JSON_OUT_HPP_

// Deterministic JSON text: insertion-ordered keys, two-space indent, floating
// point values with 17 significant digits, non-finite values as null.

#include <cmath>
#include <string>

#include "json.hpp"
#include "lsqcond/io.hpp"

namespace lsqcond::cli {

using Json = nlohmann::ordered_json;

inline void write_json(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write_json(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(j[i], out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? io::format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string to_json_text(const Json& j) {
  std::string out;
  write_json(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace lsqcond::cli

#endif  // LSQCOND_TOOLS_JSON_OUT_HPP_
