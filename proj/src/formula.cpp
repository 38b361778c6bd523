// Copyright 2026 The dipsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dipsat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dipsat {

bool Clause::normalize(std::vector<Lit>& lits) {
  std::vector<Lit> sorted = lits;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == ~sorted[i - 1]) return false;
  }
  // Keep first occurrence order.
  std::vector<Lit> out;
  out.reserve(lits.size());
  for (Lit l : lits) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  lits = std::move(out);
  return true;
}

Clause Clause::make(std::vector<Lit> lits) {
  std::vector<Lit> sorted = lits;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) throw std::invalid_argument("clause contains a duplicate literal");
    if (sorted[i] == ~sorted[i - 1]) throw std::invalid_argument("clause is tautological");
  }
  for (Lit l : lits) {
    if (!l.valid()) throw std::invalid_argument("clause contains an invalid literal");
  }
  return Clause(std::move(lits));
}

Clause Clause::make(std::initializer_list<int> dimacs) {
  std::vector<Lit> lits;
  lits.reserve(dimacs.size());
  for (int d : dimacs) {
    if (d == 0) throw std::invalid_argument("literal 0 is not allowed inside a clause");
    lits.push_back(Lit::from_dimacs(d));
  }
  return make(std::move(lits));
}

void CnfFormula::add(Clause c) {
  for (Lit l : c) num_vars = std::max(num_vars, l.var().id + 1);
  clauses.push_back(std::move(c));
}

namespace {

bool parse_int(std::string_view tok, long long& out) {
  if (tok.empty()) return false;
  const char* first = tok.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

CnfFormula parse_dimacs(std::istream& in, ParseReport* report) {
  auto warn = [&](std::size_t line, const std::string& msg) {
    if (report) report->warnings.push_back("line " + std::to_string(line) + ": " + msg);
  };

  CnfFormula f;
  bool have_header = false;
  long long header_vars = 0;
  long long header_clauses = 0;
  std::vector<Lit> current;
  std::size_t lineno = 0;
  std::size_t clause_start_line = 0;
  std::size_t tautologies = 0;
  std::string line;

  auto finish_clause = [&] {
    if (!Clause::normalize(current)) {
      ++tautologies;
    } else {
      f.add(Clause::make(std::move(current)));
    }
    current.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    std::size_t first = sv.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    sv.remove_prefix(first);
    if (sv[0] == 'c') continue;
    if (sv[0] == '%') break;  // SATLIB trailer
    if (sv[0] == 'p') {
      if (have_header) throw ParseError(lineno, "duplicate header");
      std::istringstream hs{std::string(sv)};
      std::string p, fmt, v, c, extra;
      hs >> p >> fmt >> v >> c;
      if (p != "p" || fmt != "cnf" || !parse_int(v, header_vars) || !parse_int(c, header_clauses) ||
          header_vars < 0 || header_clauses < 0 || (hs >> extra)) {
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause data before 'p cnf' header");

    std::size_t pos = 0;
    while (pos < sv.size()) {
      while (pos < sv.size() && std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
      if (pos >= sv.size()) break;
      std::size_t end = pos;
      while (end < sv.size() && !std::isspace(static_cast<unsigned char>(sv[end]))) ++end;
      std::string_view tok = sv.substr(pos, end - pos);
      pos = end;
      long long value = 0;
      if (!parse_int(tok, value)) throw ParseError(lineno, "non-integer token '" + std::string(tok) + "'");
      if (value == 0) {
        finish_clause();
        continue;
      }
      if (value > std::numeric_limits<int32_t>::max() || value < -std::numeric_limits<int32_t>::max()) {
        throw ParseError(lineno, "literal out of range");
      }
      if (current.empty()) clause_start_line = lineno;
      current.push_back(Lit::from_dimacs(static_cast<int>(value)));
    }
  }

  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!current.empty()) {
    warn(clause_start_line, "last clause not terminated by 0");
    finish_clause();
  }
  if (tautologies > 0) warn(lineno, std::to_string(tautologies) + " tautological clause(s) dropped");
  if (f.num_vars > header_vars) {
    warn(lineno, "header declares " + std::to_string(header_vars) + " variables, found index " +
                     std::to_string(f.num_vars));
  } else {
    f.num_vars = static_cast<uint32_t>(header_vars);
  }
  if (static_cast<long long>(f.clauses.size() + tautologies) != header_clauses) {
    warn(lineno, "header declares " + std::to_string(header_clauses) + " clauses, found " +
                     std::to_string(f.clauses.size() + tautologies));
  }
  return f;
}

CnfFormula parse_dimacs_string(const std::string& text, ParseReport* report) {
  std::istringstream in(text);
  return parse_dimacs(in, report);
}

CnfFormula read_dimacs_file(const std::string& path, ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_dimacs(in, report);
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const Clause& c : f.clauses) {
    for (Lit l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string write_dimacs_string(const CnfFormula& f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

}  // namespace dipsat
