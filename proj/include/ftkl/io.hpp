// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"

#include "ftkl/jet.hpp"

namespace ftkl::io {

// Key order in envelopes is load-bearing for byte reproducibility.
using Json = nlohmann::ordered_json;

// %.17g: shortest fixed-rule form that round-trips a double.
std::string fmt(double x);

// Plot-ready table: header row, '.' decimal separator, LF line endings.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void row(std::initializer_list<std::string> cells);
  std::string str() const;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// {config, results, certificates, timings}; every run carries its fully
// resolved config so artifacts are self-describing.
Json envelope(Json config, Json results, Json certificates, Json timings);

// Exact rational polynomial in x1..x<nvars>: terms joined by +/-, factors
// joined by '*', each factor a rational p/q or a power x<j>^<k>.
jets::Jet parse_rational_poly(const std::string& text, int nvars, int maxdeg);

} // namespace ftkl::io
