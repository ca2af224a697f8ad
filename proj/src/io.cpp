// SPDX-License-Identifier: Apache-2.0
#include "ftkl/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ftkl/errors.hpp"

namespace ftkl::io {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Csv::row(std::initializer_list<std::string> cells) {
  rows.emplace_back(cells);
}

std::string Csv::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size())
      fail_certification("csv: row width does not match the header");
    line(r);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_usage("cannot open for writing: " + path);
  f.write(content.data(), (std::streamsize)content.size());
  if (!f) fail_usage("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail_usage("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json envelope(Json config, Json results, Json certificates, Json timings) {
  Json env;
  env["config"] = std::move(config);
  env["results"] = std::move(results);
  env["certificates"] = std::move(certificates);
  env["timings"] = std::move(timings);
  return env;
}

namespace {

struct PolyParser {
  const std::string& s;
  size_t i = 0;
  int nvars;
  int maxdeg;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  long integer() {
    skip();
    size_t start = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
    if (i == start) fail_usage("polynomial: expected a number in '" + s + "'");
    return std::stol(s.substr(start, i - start));
  }

  // factor := integer ('/' integer)? | x<j> ('^' integer)?
  void factor(jets::Rat& coef, std::array<int, 3>& exp) {
    skip();
    if (i >= s.size()) fail_usage("polynomial: dangling operator in '" + s + "'");
    if (s[i] == 'x') {
      ++i;
      long j = integer();
      if (j < 1 || j > nvars)
        fail_usage("polynomial: variable out of range in '" + s + "'");
      long k = eat('^') ? integer() : 1;
      if (k < 0 || k > maxdeg)
        fail_usage("polynomial: exponent out of range in '" + s + "'");
      exp[j - 1] += (int)k;
    } else {
      long num = integer();
      if (eat('/')) {
        long den = integer();
        if (den == 0) fail_usage("polynomial: zero denominator in '" + s + "'");
        coef *= jets::Rat(num, den);
      } else {
        coef *= num;
      }
    }
  }

  jets::Jet parse() {
    jets::Jet out = jets::jet_zero(nvars, maxdeg);
    bool first = true;
    while (true) {
      skip();
      if (i >= s.size()) {
        if (first) fail_usage("polynomial: empty input");
        break;
      }
      jets::Rat coef{1};
      if (eat('-'))
        coef = -1;
      else if (!eat('+') && !first)
        fail_usage("polynomial: expected + or - in '" + s + "'");
      first = false;
      std::array<int, 3> exp{0, 0, 0};
      factor(coef, exp);
      while (eat('*')) factor(coef, exp);
      int deg = exp[0] + exp[1] + exp[2];
      if (deg > maxdeg)
        fail_usage("polynomial: total degree exceeds the cap in '" + s + "'");
      jets::CRat cur = out.coeff(exp[0], exp[1], exp[2]);
      out.set_coeff(exp[0], exp[1], exp[2], cur + jets::CRat(coef));
    }
    return out;
  }
};

} // namespace

jets::Jet parse_rational_poly(const std::string& text, int nvars, int maxdeg) {
  if (nvars != 2 && nvars != 3) fail_usage("polynomial: nvars must be 2 or 3");
  if (maxdeg < 0) fail_usage("polynomial: negative degree cap");
  PolyParser p{text, 0, nvars, maxdeg};
  return p.parse();
}

} // namespace ftkl::io
